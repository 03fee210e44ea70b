//! Command-line interface over [`coartin_core`].
//!
//! One binary, `coartin`, with one subcommand ("verb") per task: enumerating
//! admissible degree sets, canonicalizing subalgebras of `K[x]` given by
//! generators, printing presentations, computing automorphism groups, testing
//! isomorphism, tabulating realizable automorphism orders, and emitting the
//! defining equations of the classifying varieties.
//!
//! Every verb produces a deterministic document renderable as JSON (the
//! default), plain text, or — for the tabular verbs `orders` and `sweep` —
//! CSV.  Running the same invocation twice produces byte-identical output.
//!
//! Global flags:
//!
//! * `--char p` — ground field: `0` (default) selects the rationals, a prime
//!   `p` selects the field with `p` elements;
//! * `--format json|text|csv` — output format;
//! * `--max-m N` — cap on the conductor exponent `m`; defaults to the
//!   `COARTIN_MAX_M` environment variable when set, otherwise 20.
//!
//! Exit codes: `0` on success, `2` for invalid input (bad flags, malformed
//! polynomials, inadmissible parameters), `1` for an internal error.
//!
//! Verbs are registered behind a trait object ([`Verb`]); [`registry`]
//! returns the full list, and [`run`] dispatches on the subcommand name.

use std::ffi::OsString;
use std::io::Write;

use clap::parser::ValueSource;
use clap::{value_parser, Arg, ArgGroup, ArgMatches, Command};
use serde_json::{json, Value};

use coartin_core::autiso::{aut_group, iso_test, realize_orders};
use coartin_core::semigroup::{
    enumerate_s, max_finite_order, order_tables, structure, Gamma,
};
use coartin_core::subalgebra::{
    algebra_from_json, parse_generator_list, CanonicalAlgebra, PresentationStyle,
    PresentationTarget,
};
use coartin_core::variety::{
    fixed_point_equations, variety_presentation, EquationSystem, FixedPointVariable,
};
use coartin_core::{Error, FieldSpec, Result};

/// Environment variable consulted for the enumeration cap when `--max-m` is
/// not given on the command line.
pub const MAX_M_ENV: &str = "COARTIN_MAX_M";

/// Enumeration cap used when neither `--max-m` nor [`MAX_M_ENV`] is set.
pub const DEFAULT_MAX_M: usize = 20;

/// Output format selected by `--format`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Json,
    Text,
    Csv,
}

/// Settings shared by every verb: the ground field and the `m` cap.
pub struct Context {
    /// Ground field selected by `--char`.
    pub spec: FieldSpec,
    /// Largest conductor exponent accepted by the verbs.
    pub max_m: usize,
    /// Whether `--char` was given explicitly (used to cross-check algebra
    /// documents that carry their own field).
    pub char_explicit: bool,
}

impl Context {
    fn from_matches(sub: &ArgMatches) -> Result<Self> {
        let ch = *sub.get_one::<u64>("char").expect("--char has a default");
        let spec = FieldSpec::new(ch)?;
        let char_explicit = sub.value_source("char") == Some(ValueSource::CommandLine);
        let max_m = match sub.get_one::<usize>("max-m") {
            Some(v) => *v,
            None => match std::env::var(MAX_M_ENV) {
                Ok(text) => text.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "cannot read {MAX_M_ENV}='{text}' as an integer"
                    ))
                })?,
                Err(_) => DEFAULT_MAX_M,
            },
        };
        Ok(Context {
            spec,
            max_m,
            char_explicit,
        })
    }

    /// Rejects a conductor exponent above the cap.
    pub fn check_m(&self, m: usize) -> Result<()> {
        if m > self.max_m {
            return Err(Error::InvalidParameter(format!(
                "m = {m} exceeds the cap {} (raise it with --max-m or the {MAX_M_ENV} \
                 environment variable)",
                self.max_m
            )));
        }
        Ok(())
    }

    /// The characteristic as `Some(p)` in positive characteristic, `None`
    /// over the rationals — the shape the order-table functions expect.
    pub fn p_opt(&self) -> Option<u64> {
        let p = self.spec.characteristic();
        (p != 0).then_some(p)
    }
}

/// A verb's result in all renderable shapes.  `csv` is `None` for verbs
/// without a tabular form.
pub struct Document {
    json: Value,
    text: String,
    csv: Option<String>,
}

impl Document {
    fn new(json: Value, text: String) -> Self {
        Document {
            json,
            text,
            csv: None,
        }
    }

    fn with_csv(json: Value, text: String, csv: String) -> Self {
        Document {
            json,
            text,
            csv: Some(csv),
        }
    }

    fn render(self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| Error::Internal(format!("JSON rendering failed: {e}")))?;
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Text => {
                let mut t = self.text;
                if !t.is_empty() && !t.ends_with('\n') {
                    t.push('\n');
                }
                Ok(t)
            }
            OutputFormat::Csv => {
                let mut c = self.csv.ok_or_else(|| {
                    Error::InvalidParameter(
                        "csv output is defined only for the orders and sweep verbs".into(),
                    )
                })?;
                if !c.ends_with('\n') {
                    c.push('\n');
                }
                Ok(c)
            }
        }
    }
}

/// One subcommand: its clap definition and its implementation.
pub trait Verb {
    /// Subcommand name.
    fn name(&self) -> &'static str;
    /// One-line help text.
    fn about(&self) -> &'static str;
    /// Adds the verb's own arguments to its clap `Command`.
    fn configure(&self, cmd: Command) -> Command;
    /// Executes the verb.
    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document>;
}

/// All verbs, in help order.
pub fn registry() -> Vec<Box<dyn Verb>> {
    vec![
        Box::new(EnumerateS),
        Box::new(GammaInfo),
        Box::new(Canonical),
        Box::new(Present),
        Box::new(Aut),
        Box::new(Iso),
        Box::new(Orders),
        Box::new(RealizeOrders),
        Box::new(VarietyVerb),
        Box::new(FixedPoints),
        Box::new(Sweep),
    ]
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn jval<T: serde::Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

fn join<T: std::fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// Renders a degree list as `"4,6,8"`, or `"-"` when empty.
fn degrees(xs: &[usize]) -> String {
    if xs.is_empty() {
        "-".to_string()
    } else {
        join(xs, ",")
    }
}

/// Renders an exponent vector as `"(3,0)"`.
fn vec_fmt(v: &[u32]) -> String {
    format!("({})", join(v, ","))
}

fn arg_m() -> Arg {
    Arg::new("m")
        .long("m")
        .value_name("M")
        .help("conductor exponent: the subalgebras contain x^M K[x]")
        .value_parser(value_parser!(usize))
}

fn arg_gamma() -> Arg {
    Arg::new("gamma")
        .long("gamma")
        .value_name("LIST")
        .help("comma-separated degree set, e.g. 4,6,8 (omit or '-' for the empty set)")
}

fn req_m(matches: &ArgMatches) -> Result<usize> {
    matches
        .get_one::<usize>("m")
        .copied()
        .ok_or_else(|| Error::InvalidParameter("--m is required".into()))
}

fn parse_gamma(m: usize, text: Option<&String>) -> Result<Gamma> {
    let text = match text {
        None => return Gamma::empty(m),
        Some(t) => t.trim(),
    };
    if text.is_empty() || text == "-" {
        return Gamma::empty(m);
    }
    let mut members = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        members.push(part.parse::<usize>().map_err(|_| {
            Error::InvalidParameter(format!("cannot read '{part}' as a degree"))
        })?);
    }
    Gamma::new(m, members)
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {path}: {e}")))
}

/// Cross-checks an explicit `--char` against a loaded algebra document.
fn check_doc_spec(ctx: &Context, alg: &CanonicalAlgebra) -> Result<()> {
    if ctx.char_explicit && alg.spec() != ctx.spec {
        return Err(Error::InvalidParameter(format!(
            "--char {} conflicts with the algebra document's characteristic {}",
            ctx.spec.characteristic(),
            alg.spec().characteristic()
        )));
    }
    Ok(())
}

/// Adds the three algebra-input flags (`--gens`, `--gens-file`,
/// `--algebra-json`) as a required exclusive group.
fn algebra_input_args(cmd: Command) -> Command {
    cmd.arg(
        Arg::new("gens")
            .long("gens")
            .value_name("POLYS")
            .help("inline generator list; polynomials separated by ';'"),
    )
    .arg(
        Arg::new("gens-file")
            .long("gens-file")
            .value_name("FILE")
            .help("file with one generator polynomial per line ('#' starts a comment)"),
    )
    .arg(
        Arg::new("algebra-json")
            .long("algebra-json")
            .value_name("FILE")
            .help("file with a canonical algebra document, as emitted by the canonical verb"),
    )
    .group(
        ArgGroup::new("input")
            .args(["gens", "gens-file", "algebra-json"])
            .required(true)
            .multiple(false),
    )
}

/// Loads the algebra given by the `--gens`/`--gens-file`/`--algebra-json`
/// group, canonicalizing generator input via closure under products.
fn algebra_input(matches: &ArgMatches, ctx: &Context) -> Result<CanonicalAlgebra> {
    if let Some(path) = matches.get_one::<String>("algebra-json") {
        let alg = algebra_from_json(&read_file(path)?)?;
        ctx.check_m(alg.m())?;
        if let Some(&m) = matches.get_one::<usize>("m") {
            if m != alg.m() {
                return Err(Error::InvalidParameter(format!(
                    "algebra document in {path} has m = {}, but --m {m} was given",
                    alg.m()
                )));
            }
        }
        check_doc_spec(ctx, &alg)?;
        return Ok(alg);
    }
    let m = *matches.get_one::<usize>("m").ok_or_else(|| {
        Error::InvalidParameter("--m is required unless --algebra-json is given".into())
    })?;
    ctx.check_m(m)?;
    let text = if let Some(inline) = matches.get_one::<String>("gens") {
        inline.replace(';', "\n")
    } else if let Some(path) = matches.get_one::<String>("gens-file") {
        read_file(path)?
    } else {
        return Err(Error::InvalidParameter(
            "provide generators with --gens or --gens-file, or a document with --algebra-json"
                .into(),
        ));
    };
    let gens = parse_generator_list(ctx.spec, &text)?;
    CanonicalAlgebra::from_generators(ctx.spec, m, &gens)
}

/// The argument ids of one `iso` side: inline, file, document, group.
fn side_keys(prefix: &str) -> (&'static str, &'static str, &'static str, &'static str) {
    match prefix {
        "a" => ("a", "a-file", "a-json", "side-a"),
        _ => ("b", "b-file", "b-json", "side-b"),
    }
}

/// Adds one side's input flags for the `iso` verb (`--a`, `--a-file`,
/// `--a-json` for prefix `"a"`, likewise for `"b"`).
fn side_args(cmd: Command, prefix: &'static str) -> Command {
    let (inline, file, jsonf, group) = side_keys(prefix);
    cmd.arg(
        Arg::new(inline)
            .long(inline)
            .value_name("POLYS")
            .help("inline generator list for this side; polynomials separated by ';'"),
    )
    .arg(
        Arg::new(file)
            .long(file)
            .value_name("FILE")
            .help("generator file for this side, one polynomial per line"),
    )
    .arg(
        Arg::new(jsonf)
            .long(jsonf)
            .value_name("FILE")
            .help("canonical algebra document for this side"),
    )
    .group(
        ArgGroup::new(group)
            .args([inline, file, jsonf])
            .required(true)
            .multiple(false),
    )
}

fn algebra_side(
    matches: &ArgMatches,
    ctx: &Context,
    m: usize,
    prefix: &str,
) -> Result<CanonicalAlgebra> {
    let (inline_key, file_key, json_key, _) = side_keys(prefix);
    if let Some(path) = matches.get_one::<String>(json_key) {
        let alg = algebra_from_json(&read_file(path)?)?;
        if alg.m() != m {
            return Err(Error::InvalidParameter(format!(
                "algebra document in {path} has m = {}, but --m {m} was given",
                alg.m()
            )));
        }
        check_doc_spec(ctx, &alg)?;
        return Ok(alg);
    }
    let text = if let Some(inline) = matches.get_one::<String>(inline_key) {
        inline.replace(';', "\n")
    } else if let Some(path) = matches.get_one::<String>(file_key) {
        read_file(path)?
    } else {
        return Err(Error::InvalidParameter(format!(
            "provide --{prefix}, --{prefix}-file, or --{prefix}-json"
        )));
    };
    let gens = parse_generator_list(ctx.spec, &text)?;
    CanonicalAlgebra::from_generators(ctx.spec, m, &gens)
}

fn algebra_text(alg: &CanonicalAlgebra) -> Result<String> {
    let mut text = format!(
        "m: {}\ncharacteristic: {}\ngamma: {}\ndim: {}\nmonomial: {}\n",
        alg.m(),
        alg.spec().characteristic(),
        degrees(alg.gamma().members()),
        alg.dimension_bar(),
        if alg.is_monomial() { "yes" } else { "no" }
    );
    for &g in alg.gamma().members() {
        text.push_str(&format!("f_{g} = {}\n", alg.basis_element(g)?.render()));
    }
    Ok(text)
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

/// `enumerate-s`: all admissible degree sets for a given `m`.
struct EnumerateS;

impl Verb for EnumerateS {
    fn name(&self) -> &'static str {
        "enumerate-s"
    }

    fn about(&self) -> &'static str {
        "List every admissible degree set for the conductor exponent m"
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(arg_m().required(true))
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let m = req_m(matches)?;
        ctx.check_m(m)?;
        let list = enumerate_s(m)?;
        let sets: Vec<Vec<usize>> = list.iter().map(|g| g.members().to_vec()).collect();
        let json = json!({ "m": m, "count": sets.len(), "semigroups": sets });
        let text = list
            .iter()
            .map(|g| degrees(g.members()))
            .collect::<Vec<_>>()
            .join("\n");
        Ok(Document::new(json, text))
    }
}

/// `gamma-info`: combinatorial invariants of one degree set.
struct GammaInfo;

impl Verb for GammaInfo {
    fn name(&self) -> &'static str {
        "gamma-info"
    }

    fn about(&self) -> &'static str {
        "Show indecomposables, relations, and order data of one degree set"
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(arg_m().required(true)).arg(arg_gamma())
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let m = req_m(matches)?;
        ctx.check_m(m)?;
        let gamma = parse_gamma(m, matches.get_one::<String>("gamma"))?;
        let order_l = gamma.order_set_l(ctx.p_opt());
        let complement = gamma.complement();

        if gamma.is_empty() {
            let json = json!({
                "m": m,
                "gamma": [],
                "complement": complement,
                "orderSetL": order_l,
                "indecomposables": [],
                "decomposables": [],
                "multiDecomposables": [],
                "relations": [],
                "relationLatticeRank": 0,
                "conductorGenerators": [],
                "relationBasis": Value::Null,
            });
            let text = format!(
                "m: {m}\ngamma: -\ncomplement: {}\norder set L: {}\n",
                degrees(&complement),
                degrees(&order_l)
            );
            return Ok(Document::new(json, text));
        }

        let st = structure(&gamma)?;
        let relations: Vec<Value> = gamma
            .members()
            .iter()
            .map(|&g| {
                json!({
                    "degree": g,
                    "vectors": st.rel(g).to_vec(),
                    "aChoice": st.a_choice(g).clone(),
                })
            })
            .collect();
        let rb = st.relation_basis();
        let json = json!({
            "m": m,
            "gamma": gamma.members(),
            "complement": complement,
            "orderSetL": order_l,
            "indecomposables": st.nu(),
            "decomposables": st.dec(),
            "multiDecomposables": st.dec_ge2(),
            "relations": relations,
            "relationLatticeRank": st.relation_lattice_rank(),
            "conductorGenerators": st.conductor_ideal_generators(),
            "relationBasis": {
                "bBasis": rb.b_basis,
                "bPrime": rb.b_prime,
                "avoidable": rb.avoidable,
                "nonAvoidable": rb.non_avoidable,
                "bList": rb.b_list,
                "muList": rb.mu_list,
                "t": rb.t,
            },
        });

        let mut text = format!(
            "m: {m}\ngamma: {}\ncomplement: {}\norder set L: {}\nindecomposables: {}\n\
             decomposables: {}\nwith two or more decompositions: {}\nrelation lattice rank: {}\n",
            degrees(gamma.members()),
            degrees(&complement),
            degrees(&order_l),
            degrees(st.nu()),
            degrees(st.dec()),
            degrees(st.dec_ge2()),
            st.relation_lattice_rank()
        );
        for &g in gamma.members() {
            let vecs = st
                .rel(g)
                .iter()
                .map(|v| vec_fmt(v))
                .collect::<Vec<_>>()
                .join(" ");
            text.push_str(&format!(
                "rel {g}: {vecs}   a = {}\n",
                vec_fmt(st.a_choice(g))
            ));
        }
        let cond = st
            .conductor_ideal_generators()
            .iter()
            .map(|v| vec_fmt(v))
            .collect::<Vec<_>>()
            .join(" ");
        text.push_str(&format!("conductor ideal generators: {cond}\n"));
        text.push_str(&format!("irredundant first-kind relations: {}\n", rb.t));
        Ok(Document::new(json, text))
    }
}

/// `canonical`: the canonical basis and coefficient table of one algebra.
struct Canonical;

impl Verb for Canonical {
    fn name(&self) -> &'static str {
        "canonical"
    }

    fn about(&self) -> &'static str {
        "Canonicalize an algebra given by generators (or echo a document)"
    }

    fn configure(&self, cmd: Command) -> Command {
        algebra_input_args(cmd.arg(arg_m().required_unless_present("algebra-json")))
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let alg = algebra_input(matches, ctx)?;
        Ok(Document::new(jval(&alg)?, algebra_text(&alg)?))
    }
}

/// `present`: a generator/relation presentation of one algebra.
struct Present;

impl Verb for Present {
    fn name(&self) -> &'static str {
        "present"
    }

    fn about(&self) -> &'static str {
        "Emit a generators-and-relations presentation of one algebra"
    }

    fn configure(&self, cmd: Command) -> Command {
        algebra_input_args(
            cmd.arg(arg_m().required_unless_present("algebra-json"))
                .arg(
                    Arg::new("target")
                        .long("target")
                        .value_parser(["bar", "full"])
                        .default_value("bar")
                        .help("present the finite quotient (bar) or the full subalgebra"),
                )
                .arg(
                    Arg::new("style")
                        .long("style")
                        .value_parser(["raw", "irredundant"])
                        .default_value("raw")
                        .help("list all decomposition relations, or only the irredundant basis"),
                ),
        )
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let alg = algebra_input(matches, ctx)?;
        let target = match matches.get_one::<String>("target").map(|s| s.as_str()) {
            Some("full") => PresentationTarget::FullA,
            _ => PresentationTarget::BarA,
        };
        let style = match matches.get_one::<String>("style").map(|s| s.as_str()) {
            Some("irredundant") => PresentationStyle::Irredundant,
            _ => PresentationStyle::Raw,
        };
        let pres = alg.present(target, style)?;
        Ok(Document::new(jval(&pres)?, pres.to_string()))
    }
}

/// `aut`: the automorphism group of one algebra.
struct Aut;

impl Verb for Aut {
    fn name(&self) -> &'static str {
        "aut"
    }

    fn about(&self) -> &'static str {
        "Compute the automorphism group of one algebra"
    }

    fn configure(&self, cmd: Command) -> Command {
        algebra_input_args(cmd.arg(arg_m().required_unless_present("algebra-json")))
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let alg = algebra_input(matches, ctx)?;
        let aut = aut_group(&alg)?;
        Ok(Document::new(jval(&aut)?, aut.to_string()))
    }
}

/// `iso`: isomorphism test for two algebras over the same field.
struct Iso;

impl Verb for Iso {
    fn name(&self) -> &'static str {
        "iso"
    }

    fn about(&self) -> &'static str {
        "Test whether two algebras are isomorphic via a scaling of x"
    }

    fn configure(&self, cmd: Command) -> Command {
        side_args(side_args(cmd.arg(arg_m().required(true)), "a"), "b")
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let m = req_m(matches)?;
        ctx.check_m(m)?;
        let a = algebra_side(matches, ctx, m, "a")?;
        let b = algebra_side(matches, ctx, m, "b")?;
        let w = iso_test(&a, &b)?;
        let g = w.forced_power.exponent;
        let mu = w.forced_power.value.clone();
        // A solvable system fixes mu = lambda^g over the closure.  Over the
        // ground field itself an isomorphism needs an actual g-th root.
        let ground = if !w.solvable {
            None
        } else if g == 0 {
            Some(ctx.spec.one())
        } else {
            u64::try_from(g).ok().and_then(|gg| mu.nth_root(gg))
        };
        let json = json!({
            "isomorphic": w.solvable,
            "forced_power": { "g": g, "mu": mu.to_string() },
            "checkedExponents": jval(&w.checked_exponents)?,
            "obstruction": w.obstruction,
            "groundFieldWitness": ground.as_ref().map(|r| r.to_string()),
        });
        let text = if !w.solvable {
            format!(
                "isomorphic: no\nobstruction: {}\n",
                w.obstruction.as_deref().unwrap_or("power conditions are inconsistent")
            )
        } else {
            match ground {
                Some(r) => format!(
                    "isomorphic: yes\nforced power: g={g}, mu={mu}\n\
                     ground-field witness: lambda = {r}\n"
                ),
                None => format!(
                    "isomorphic: yes (over the algebraic closure)\nforced power: g={g}, mu={mu}\n\
                     note: mu has no {g}-th root in the ground field, so no torus isomorphism \
                     is defined over the ground field itself\n"
                ),
            }
        };
        Ok(Document::new(json, text))
    }
}

/// `orders`: the three order tables for one `m`.
struct Orders;

impl Verb for Orders {
    fn name(&self) -> &'static str {
        "orders"
    }

    fn about(&self) -> &'static str {
        "Tabulate shift orders: possible (L), blocked (B), realized (O)"
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(arg_m().required(true))
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let m = req_m(matches)?;
        ctx.check_m(m)?;
        let t = order_tables(m, ctx.p_opt())?;
        let json = json!({ "L": t.l, "B": t.b, "O": t.o });
        let text = format!(
            "L: {}\nB: {}\nO: {}\n",
            join(&t.l, " "),
            join(&t.b, " "),
            join(&t.o, " ")
        );
        let csv = format!(
            "m,L,B,O\n{m},{},{},{}\n",
            join(&t.l, " "),
            join(&t.b, " "),
            join(&t.o, " ")
        );
        Ok(Document::with_csv(json, text, csv))
    }
}

/// `realize-orders`: a witness algebra for every realizable order.
struct RealizeOrders;

impl Verb for RealizeOrders {
    fn name(&self) -> &'static str {
        "realize-orders"
    }

    fn about(&self) -> &'static str {
        "Construct an algebra realizing each realizable automorphism order"
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(arg_m().required(true))
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let m = req_m(matches)?;
        ctx.check_m(m)?;
        let map = realize_orders(ctx.spec, m)?;
        let realizations: Vec<Value> = map.values().map(jval).collect::<Result<_>>()?;
        let json = json!({ "m": m, "realizations": realizations });
        let mut text = String::new();
        for r in map.values() {
            text.push_str(&format!(
                "order {}: shift l={} on ambient {}, generator {} of degree {}\n",
                r.order,
                r.shift,
                degrees(&r.ambient),
                r.generator.render(),
                r.witness_degree
            ));
        }
        Ok(Document::new(json, text))
    }
}

/// `variety`: defining equations of the classifying variety of `(m, Γ)`.
struct VarietyVerb;

impl Verb for VarietyVerb {
    fn name(&self) -> &'static str {
        "variety"
    }

    fn about(&self) -> &'static str {
        "Emit the defining equations of the classifying variety of (m, gamma)"
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(arg_m().required(true)).arg(arg_gamma()).arg(
            Arg::new("system")
                .long("system")
                .value_parser(["xx", "xy", "both"])
                .default_value("both")
                .help("which equation system to emit"),
        )
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let m = req_m(matches)?;
        ctx.check_m(m)?;
        let gamma = parse_gamma(m, matches.get_one::<String>("gamma"))?;
        let pres = variety_presentation(ctx.spec, &gamma)?;
        let system = matches
            .get_one::<String>("system")
            .map(|s| s.as_str())
            .unwrap_or("both");

        let mut value = jval(&pres)?;
        if system != "both" {
            let obj = value
                .as_object_mut()
                .ok_or_else(|| Error::Internal("presentation document is not an object".into()))?;
            let (keep, drop) = if system == "xx" {
                ("equationsXX", "equationsXY")
            } else {
                ("equationsXY", "equationsXX")
            };
            let eqs = obj.remove(keep).unwrap_or_else(|| Value::Array(Vec::new()));
            obj.remove(drop);
            obj.insert("system".into(), Value::String(system.to_string()));
            obj.insert("equations".into(), eqs);
        }

        let mut sections = Vec::new();
        if system != "xy" {
            let s = pres.render_equations(EquationSystem::Xx);
            if !s.trim().is_empty() {
                sections.push(s.trim_end().to_string());
            }
        }
        if system != "xx" {
            let s = pres.render_equations(EquationSystem::Xy);
            if !s.trim().is_empty() {
                sections.push(s.trim_end().to_string());
            }
        }
        Ok(Document::new(value, sections.join("\n")))
    }
}

/// `fixed-points`: coefficients killed by a torus element of a given order.
struct FixedPoints;

impl Verb for FixedPoints {
    fn name(&self) -> &'static str {
        "fixed-points"
    }

    fn about(&self) -> &'static str {
        "List coefficient entries a torus element of order n forces to zero"
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(arg_m().required(true)).arg(arg_gamma()).arg(
            Arg::new("n")
                .long("n")
                .value_name("N")
                .required(true)
                .value_parser(value_parser!(u64))
                .help("order of the scaling; entries with weight not divisible by n are killed"),
        )
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let m = req_m(matches)?;
        ctx.check_m(m)?;
        let n = *matches
            .get_one::<u64>("n")
            .ok_or_else(|| Error::InvalidParameter("--n is required".into()))?;
        let gamma = parse_gamma(m, matches.get_one::<String>("gamma"))?;
        let killed: Vec<FixedPointVariable> = if gamma.is_empty() {
            if n == 0 {
                return Err(Error::InvalidParameter(
                    "n must be a positive integer".into(),
                ));
            }
            Vec::new()
        } else {
            let st = structure(&gamma)?;
            fixed_point_equations(&st, n)?
        };
        let json = json!({
            "m": m,
            "gamma": gamma.members(),
            "n": n,
            "killed": jval(&killed)?,
        });
        let text = killed
            .iter()
            .map(|v| {
                format!(
                    "l_{}_{} weight={}{}",
                    v.row,
                    v.column,
                    v.weight,
                    if v.induced { " (induced)" } else { "" }
                )
            })
            .collect::<Vec<_>>()
            .join("\n");
        Ok(Document::new(json, text))
    }
}

/// `sweep`: per-`m` summary table over a range.
struct Sweep;

impl Verb for Sweep {
    fn name(&self) -> &'static str {
        "sweep"
    }

    fn about(&self) -> &'static str {
        "Tabulate counts and order tables over a range of m"
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(
            Arg::new("from")
                .long("from")
                .value_name("M")
                .value_parser(value_parser!(usize))
                .default_value("4")
                .help("first conductor exponent (at least 4)"),
        )
        .arg(
            Arg::new("to")
                .long("to")
                .value_name("M")
                .value_parser(value_parser!(usize))
                .help("last conductor exponent (default: the --max-m cap)"),
        )
    }

    fn run(&self, matches: &ArgMatches, ctx: &Context) -> Result<Document> {
        let from = *matches.get_one::<usize>("from").expect("--from has a default");
        let to = matches.get_one::<usize>("to").copied().unwrap_or(ctx.max_m);
        if from < 4 {
            return Err(Error::InvalidParameter(format!(
                "--from must be at least 4, got {from}"
            )));
        }
        if from > to {
            return Err(Error::InvalidParameter(format!(
                "--from {from} exceeds --to {to}"
            )));
        }
        ctx.check_m(to)?;
        let mut rows = Vec::new();
        let mut text = String::new();
        let mut csv = String::from("m,semigroups,L,B,O,maxOrder\n");
        for m in from..=to {
            let count = enumerate_s(m)?.len();
            let t = order_tables(m, ctx.p_opt())?;
            let mo = max_finite_order(m, ctx.p_opt())?;
            rows.push(json!({
                "m": m,
                "semigroups": count,
                "L": t.l,
                "B": t.b,
                "O": t.o,
                "maxOrder": mo,
            }));
            text.push_str(&format!(
                "m={m}: {count} semigroups, L={{{}}}, B={{{}}}, O={{{}}}, max order {mo}\n",
                join(&t.l, " "),
                join(&t.b, " "),
                join(&t.o, " ")
            ));
            csv.push_str(&format!(
                "{m},{count},{},{},{},{mo}\n",
                join(&t.l, " "),
                join(&t.b, " "),
                join(&t.o, " ")
            ));
        }
        let json = json!({ "from": from, "to": to, "rows": rows });
        Ok(Document::with_csv(json, text, csv))
    }
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

fn build_command(verbs: &[Box<dyn Verb>]) -> Command {
    let mut cmd = Command::new("coartin")
        .about("Exact classification of finite-codimension subalgebras of K[x]")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("char")
                .long("char")
                .value_name("P")
                .help("field characteristic: 0 for the rationals, a prime p for F_p")
                .value_parser(value_parser!(u64))
                .default_value("0")
                .global(true),
        )
        .arg(
            Arg::new("format")
                .long("format")
                .value_name("FMT")
                .help("output format")
                .value_parser(["json", "text", "csv"])
                .default_value("json")
                .global(true),
        )
        .arg(
            Arg::new("max-m")
                .long("max-m")
                .value_name("N")
                .help("cap on the conductor exponent (default: COARTIN_MAX_M or 20)")
                .value_parser(value_parser!(usize))
                .global(true),
        );
    for v in verbs {
        cmd = cmd.subcommand(v.configure(Command::new(v.name()).about(v.about())));
    }
    cmd
}

fn execute(verbs: &[Box<dyn Verb>], name: &str, sub: &ArgMatches) -> Result<String> {
    let ctx = Context::from_matches(sub)?;
    let format = match sub
        .get_one::<String>("format")
        .map(|s| s.as_str())
        .unwrap_or("json")
    {
        "text" => OutputFormat::Text,
        "csv" => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    let verb = verbs
        .iter()
        .find(|v| v.name() == name)
        .ok_or_else(|| Error::Internal(format!("unregistered verb '{name}'")))?;
    verb.run(sub, &ctx)?.render(format)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => 1,
        _ => 2,
    }
}

/// Parses `argv` and runs the selected verb, writing the document to `out`
/// and diagnostics to `err`.  Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let verbs = registry();
    let cmd = build_command(&verbs);
    let matches = match cmd.try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    match execute(&verbs, name, sub) {
        Ok(rendered) => {
            let _ = out.write_all(rendered.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs the CLI in-process against string arguments (without the leading
/// program name) and captures `(exit code, stdout, stderr)`.
pub fn run_for_test(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("coartin".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect::<Vec<_>>();
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}
