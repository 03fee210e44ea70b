//! Defining equations of the classifying affine varieties.
//!
//! For a fixed conductor exponent `m` and degree set `Γ`, the algebras with
//! that exact degree pattern form an affine variety whose coordinates are
//! the canonical coefficients `λ_{ν,j}` of the indecomposable generators
//! (`ν` indecomposable, `j ∈ CΓ(ν)`).  This module manufactures that
//! variety's presentation exactly:
//!
//! * the product system — expand `f_ν f^{a(γ)}` over the distinguished
//!   powers and demand the residual vanish (one equation per complement
//!   column of each obstructed product);
//! * the relation system — compare the two sides `f^b` and `f^{a(γ)}` of a
//!   degree with several decompositions (one equation per complement column
//!   of each extra relation), together with its exact equation count and
//!   the dimension lower bound `n − l`;
//! * the symbolic `η` and `θ` coefficient families behind both systems,
//!   the symbolic canonical coefficient table (decomposable rows expressed
//!   as polynomials in the indecomposable ones), and the change of basis
//!   between the canonical basis and the distinguished power basis;
//! * the affine-space special cases (a single indecomposable, or no degree
//!   with two decompositions) where the variety is a coordinate space with
//!   no equations, and the trivial case `Γ = ∅`;
//! * the torus weights `j − ν` of the coordinates and the fixed-point
//!   conditions of the cyclic subgroup actions.
//!
//! All solves are division-free back-substitutions against unitriangular
//! systems, so every emitted object is a genuine polynomial over the base
//! field.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};
use crate::semigroup::{structure, ExpVec, Gamma, GammaStructure};
use crate::subalgebra::CanonicalAlgebra;
use crate::sympoly::SymPoly;

/// One coordinate `λ_{ν,j}` of the parameter space: the coefficient of
/// `x^j` in the canonical generator of degree `ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaVariable {
    pub nu: usize,
    pub j: usize,
}

impl LambdaVariable {
    /// Torus weight: `t_c` rescales this coordinate by `c^{j−ν}`.
    pub fn weight(&self) -> i64 {
        self.j as i64 - self.nu as i64
    }

    /// The export name `l_{ν}_{j}`.
    pub fn name(&self) -> String {
        format!("l_{}_{}", self.nu, self.j)
    }
}

/// The ordered coordinate universe of one variety: a variable per
/// indecomposable-row entry, rows ascending, columns ascending within a
/// row.  All equations of the variety are polynomials over this universe.
#[derive(Clone, Debug)]
pub struct VarRegistry {
    spec: FieldSpec,
    m: usize,
    gamma: Vec<usize>,
    vars: Vec<LambdaVariable>,
    index: BTreeMap<(usize, usize), usize>,
}

impl VarRegistry {
    fn new(spec: FieldSpec, st: &GammaStructure) -> Result<Self> {
        let mut vars = Vec::new();
        let mut index = BTreeMap::new();
        for &nu in st.nu() {
            for j in st.gamma().c_gamma_after(nu)? {
                index.insert((nu, j), vars.len());
                vars.push(LambdaVariable { nu, j });
            }
        }
        Ok(VarRegistry {
            spec,
            m: st.m(),
            gamma: st.gamma().members().to_vec(),
            vars,
            index,
        })
    }

    fn trivial(spec: FieldSpec, m: usize) -> Self {
        VarRegistry {
            spec,
            m,
            gamma: Vec::new(),
            vars: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[LambdaVariable] {
        &self.vars
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(LambdaVariable::name).collect()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.vars.iter().map(LambdaVariable::weight).collect()
    }

    /// Position of `λ_{ν,j}` in the universe order, if it is a coordinate.
    pub fn position(&self, nu: usize, j: usize) -> Option<usize> {
        self.index.get(&(nu, j)).copied()
    }

    /// The coordinate `λ_{ν,j}` as a polynomial.
    pub fn variable_poly(&self, nu: usize, j: usize) -> Option<SymPoly> {
        self.position(nu, j)
            .map(|p| SymPoly::variable(self.spec, self.vars.len(), p))
    }

    /// Reads a concrete algebra's indecomposable-row coefficients as a
    /// point of this coordinate space.
    pub fn point_of(&self, alg: &CanonicalAlgebra) -> Result<Vec<FieldScalar>> {
        if alg.spec() != self.spec {
            return Err(Error::InvalidParameter(
                "algebra defined over a different field".into(),
            ));
        }
        if alg.m() != self.m || alg.gamma().members() != &self.gamma[..] {
            return Err(Error::InvalidParameter(format!(
                "algebra has degree set {:?} at conductor exponent {}, \
                 the variety is for {:?} at {}",
                alg.gamma().members(),
                alg.m(),
                self.gamma,
                self.m
            )));
        }
        Ok(self
            .vars
            .iter()
            .map(|v| alg.lambda_value(v.nu, v.j))
            .collect())
    }
}

/// Where an equation comes from: a product obstruction (`xx`) or an extra
/// decomposition relation (`xy`), together with the complement column it
/// was read off.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "system")]
pub enum EquationSource {
    #[serde(rename = "xx")]
    Xx { nu: usize, gamma: usize, column: usize },
    #[serde(rename = "xy")]
    Xy { gamma: usize, b: ExpVec, column: usize },
}

/// One defining equation, with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietyEquation {
    pub source: EquationSource,
    pub poly: SymPoly,
}

impl VarietyEquation {
    /// The complement column the equation was extracted at.
    pub fn column(&self) -> usize {
        match self.source {
            EquationSource::Xx { column, .. } | EquationSource::Xy { column, .. } => column,
        }
    }

    /// The degree of the element whose expansion produced the equation;
    /// every term of the equation has torus weight `column − target`.
    pub fn target_degree(&self) -> usize {
        match self.source {
            EquationSource::Xx { nu, gamma, .. } => nu + gamma,
            EquationSource::Xy { gamma, .. } => gamma,
        }
    }
}

/// Which of the two equation systems to address.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationSystem {
    Xx,
    Xy,
}

/// The case a degree set falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum VarietyKind {
    /// `Γ = ∅`: a single point, no coordinates.
    Trivial,
    /// A single indecomposable, or no degree with two decompositions: the
    /// variety is the full coordinate space.
    AffineSpace,
    /// At least two indecomposables and a degree with two decompositions:
    /// genuine equations.
    General,
}

/// The full presentation of one classifying variety.
#[derive(Clone, Debug)]
pub struct VarietyPresentation {
    m: usize,
    gamma: Vec<usize>,
    kind: VarietyKind,
    registry: VarRegistry,
    equations_xx: Vec<VarietyEquation>,
    equations_xy: Vec<VarietyEquation>,
    l_xy: usize,
    dim_lower_bound: i64,
}

impl VarietyPresentation {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gamma_members(&self) -> &[usize] {
        &self.gamma
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    pub fn registry(&self) -> &VarRegistry {
        &self.registry
    }

    pub fn n_vars(&self) -> usize {
        self.registry.len()
    }

    pub fn equations(&self, system: EquationSystem) -> &[VarietyEquation] {
        match system {
            EquationSystem::Xx => &self.equations_xx,
            EquationSystem::Xy => &self.equations_xy,
        }
    }

    pub fn l_xy(&self) -> usize {
        self.l_xy
    }

    pub fn dim_lower_bound(&self) -> i64 {
        self.dim_lower_bound
    }

    /// Plain-text export: one polynomial per line (each understood as
    /// `= 0`), variables named `l_{ν}_{j}`.
    pub fn render_equations(&self, system: EquationSystem) -> String {
        let names = self.registry.names();
        self.equations(system)
            .iter()
            .map(|eq| eq.poly.render(&names))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[derive(Serialize)]
struct VariableView {
    nu: usize,
    j: usize,
    weight: i64,
    name: String,
}

#[derive(Serialize)]
struct EquationView<'a> {
    source: &'a EquationSource,
    rendered: String,
    terms: &'a SymPoly,
}

fn equation_views<'a>(eqs: &'a [VarietyEquation], names: &[String]) -> Vec<EquationView<'a>> {
    eqs.iter()
        .map(|eq| EquationView {
            source: &eq.source,
            rendered: eq.poly.render(names),
            terms: &eq.poly,
        })
        .collect()
}

impl Serialize for VarietyPresentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let names = self.registry.names();
        let variables: Vec<VariableView> = self
            .registry
            .variables()
            .iter()
            .map(|v| VariableView {
                nu: v.nu,
                j: v.j,
                weight: v.weight(),
                name: v.name(),
            })
            .collect();
        let mut out = serializer.serialize_struct("VarietyPresentation", 9)?;
        out.serialize_field("m", &self.m)?;
        out.serialize_field("gamma", &self.gamma)?;
        out.serialize_field("kind", &self.kind)?;
        out.serialize_field("variables", &variables)?;
        out.serialize_field("nVars", &self.registry.len())?;
        out.serialize_field("equationsXX", &equation_views(&self.equations_xx, &names))?;
        out.serialize_field("equationsXY", &equation_views(&self.equations_xy, &names))?;
        out.serialize_field("lXY", &self.l_xy)?;
        out.serialize_field("dimLowerBound", &self.dim_lower_bound)?;
        out.end()
    }
}

/// A coordinate of the full canonical table forced to vanish on the fixed
/// locus of the order-`n` cyclic torus subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointVariable {
    /// The canonical row (a member of `Γ`, not necessarily indecomposable).
    pub row: usize,
    pub column: usize,
    /// `column − row`, the torus weight; not divisible by `n`.
    pub weight: usize,
    /// True when the row is decomposable, so the vanishing is induced by
    /// the indecomposable-row conditions rather than a free coordinate.
    pub induced: bool,
}

impl FixedPointVariable {
    pub fn name(&self) -> String {
        format!("l_{}_{}", self.row, self.column)
    }
}

impl Serialize for FixedPointVariable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut out = serializer.serialize_struct("FixedPointVariable", 5)?;
        out.serialize_field("row", &self.row)?;
        out.serialize_field("column", &self.column)?;
        out.serialize_field("weight", &self.weight)?;
        out.serialize_field("induced", &self.induced)?;
        out.serialize_field("name", &self.name())?;
        out.end()
    }
}

// ---------------------------------------------------------------------------
// Symbolic truncated polynomials and the shared computation context.
// ---------------------------------------------------------------------------

/// A truncated polynomial in `x` whose coefficients are polynomials in the
/// `λ` coordinates; index = degree, length = the conductor exponent.
#[derive(Clone, Debug, PartialEq)]
struct SymTrunc {
    coeffs: Vec<SymPoly>,
}

impl SymTrunc {
    fn zero(spec: FieldSpec, nvars: usize, m: usize) -> Self {
        SymTrunc {
            coeffs: vec![SymPoly::zero(spec, nvars); m],
        }
    }

    fn coeff(&self, d: usize) -> &SymPoly {
        &self.coeffs[d]
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SymPoly::is_zero)
    }

    fn mul(&self, other: &SymTrunc) -> SymTrunc {
        let m = self.coeffs.len();
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = SymPoly::zero(c.spec(), c.nvars());
        }
        for (d1, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (d2, b) in other.coeffs.iter().enumerate() {
                if d1 + d2 >= m {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out.coeffs[d1 + d2] = &out.coeffs[d1 + d2] + &(a * b);
            }
        }
        out
    }

    fn sub(&self, other: &SymTrunc) -> SymTrunc {
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c = &*c - o;
        }
        out
    }

    /// `self − factor · other`.
    fn sub_scaled(&self, factor: &SymPoly, other: &SymTrunc) -> SymTrunc {
        if factor.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            if !o.is_zero() {
                *c = &*c - &(factor * o);
            }
        }
        out
    }
}

/// Shared state of one symbolic computation: the registry, the generator
/// rows, memoized distinguished powers, and the canonical rows.
struct SymCtx<'a> {
    spec: FieldSpec,
    st: &'a GammaStructure,
    reg: VarRegistry,
    gens: BTreeMap<usize, SymTrunc>,
    powers: BTreeMap<ExpVec, SymTrunc>,
    rows: Option<BTreeMap<usize, SymTrunc>>,
}

impl<'a> SymCtx<'a> {
    fn new(spec: FieldSpec, st: &'a GammaStructure) -> Result<Self> {
        let reg = VarRegistry::new(spec, st)?;
        let n = reg.len();
        let m = st.m();
        let mut gens = BTreeMap::new();
        for &nu in st.nu() {
            let mut f = SymTrunc::zero(spec, n, m);
            f.coeffs[nu] = SymPoly::constant(n, spec.one());
            for j in st.gamma().c_gamma_after(nu)? {
                let pos = reg.position(nu, j).expect("registered coordinate");
                f.coeffs[j] = SymPoly::variable(spec, n, pos);
            }
            gens.insert(nu, f);
        }
        Ok(SymCtx {
            spec,
            st,
            reg,
            gens,
            powers: BTreeMap::new(),
            rows: None,
        })
    }

    /// The distinguished power `f^a = Π F_{ν_t}^{a_t}`, memoized.
    fn power(&mut self, a: &ExpVec) -> SymTrunc {
        if let Some(p) = self.powers.get(a) {
            return p.clone();
        }
        let result = match a.iter().rposition(|&e| e > 0) {
            None => {
                let mut one = SymTrunc::zero(self.spec, self.reg.len(), self.st.m());
                one.coeffs[0] = SymPoly::constant(self.reg.len(), self.spec.one());
                one
            }
            Some(t) => {
                let mut b = a.clone();
                b[t] -= 1;
                let lower = self.power(&b);
                let nu = self.st.nu()[t];
                lower.mul(&self.gens[&nu])
            }
        };
        self.powers.insert(a.clone(), result.clone());
        result
    }

    /// Canonical rows `f_γ` for every `γ ∈ Γ`: the indecomposable rows are
    /// the generators themselves; a decomposable row is `f^{a(γ)}` with its
    /// coefficients at higher degrees of `Γ` cleared against the already
    /// canonical higher rows (computed top degree first, so the clearing is
    /// division-free and exact).
    fn canonical_rows(&mut self) -> Result<&BTreeMap<usize, SymTrunc>> {
        if self.rows.is_none() {
            let members = self.st.gamma().members().to_vec();
            let dec = self.st.dec().to_vec();
            let mut rows: BTreeMap<usize, SymTrunc> = BTreeMap::new();
            for &g in members.iter().rev() {
                let mut row = if dec.contains(&g) {
                    self.power(&self.st.a_choice(g).clone())
                } else {
                    self.gens[&g].clone()
                };
                for g2 in self.st.gamma().gamma_after(g)? {
                    let e = row.coeff(g2).clone();
                    if !e.is_zero() {
                        row = row.sub_scaled(&e, &rows[&g2]);
                    }
                }
                rows.insert(g, row);
            }
            self.rows = Some(rows);
        }
        Ok(self.rows.as_ref().expect("just computed"))
    }

    /// The full symbolic canonical coefficient table: entry `(γ, j)` for
    /// every `γ ∈ Γ` and `j ∈ CΓ(γ)`.
    fn lambda_table(&mut self) -> Result<BTreeMap<(usize, usize), SymPoly>> {
        let gamma = self.st.gamma().clone();
        self.canonical_rows()?;
        let rows = self.rows.as_ref().expect("rows computed");
        let mut table = BTreeMap::new();
        for &g in gamma.members() {
            let row = &rows[&g];
            for j in gamma.c_gamma_after(g)? {
                table.insert((g, j), row.coeff(j).clone());
            }
        }
        Ok(table)
    }

    /// Change of basis from the canonical basis to the distinguished
    /// powers: `f_γ = f^{a(γ)} + Σ_{γ' ∈ Γ(γ)} η_{γγ'} f^{a(γ')}`, exactly.
    /// Rows of indecomposable degree are zero.
    fn basis_change(&mut self) -> Result<BTreeMap<(usize, usize), SymPoly>> {
        let gamma = self.st.gamma().clone();
        self.canonical_rows()?;
        let mut map = BTreeMap::new();
        for &g in gamma.members() {
            let row = self.rows.as_ref().expect("rows computed")[&g].clone();
            let mut d = row.sub(&self.power(&self.st.a_choice(g).clone()));
            for g2 in gamma.gamma_after(g)? {
                let c = d.coeff(g2).clone();
                if !c.is_zero() {
                    let p = self.power(&self.st.a_choice(g2).clone());
                    d = d.sub_scaled(&c, &p);
                }
                map.insert((g, g2), c);
            }
            if !d.is_zero() {
                return Err(Error::Internal(format!(
                    "canonical row {g} is not an exact combination of the \
                     distinguished powers"
                )));
            }
        }
        Ok(map)
    }

    /// The product-system coefficient family: for every indecomposable `ν`
    /// and `γ ∈ Γ` with `ν+γ ∈ Γ`, expand
    /// `f_ν f^{a(γ)} − f^{a(ν+γ)} = Σ_{δ ∈ Γ(ν+γ)} η_{ν,γ;δ} f^{a(δ)} + R`
    /// by ascending back-substitution; the keys are `(ν, γ, δ)`.
    fn eta(&mut self) -> Result<BTreeMap<(usize, usize, usize), SymPoly>> {
        let gamma = self.st.gamma().clone();
        let nus = self.st.nu().to_vec();
        let members = gamma.members().to_vec();
        let mut map = BTreeMap::new();
        for (i, &nu) in nus.iter().enumerate() {
            for &g in &members {
                let sum = nu + g;
                if !gamma.contains(sum) {
                    continue;
                }
                let mut c = self.st.a_choice(g).clone();
                c[i] += 1;
                let mut d = self.power(&c).sub(&self.power(&self.st.a_choice(sum).clone()));
                for delta in gamma.gamma_after(sum)? {
                    let e = d.coeff(delta).clone();
                    if !e.is_zero() {
                        let p = self.power(&self.st.a_choice(delta).clone());
                        d = d.sub_scaled(&e, &p);
                    }
                    map.insert((nu, g, delta), e);
                }
            }
        }
        Ok(map)
    }

    /// The product-system equations: residual columns of the obstructed
    /// products.  A product is obstructed when `a(γ) + e_i ≠ a(ν_i+γ)`;
    /// products reaching the same exponent vector are emitted once.
    fn xx(&mut self) -> Result<Vec<VarietyEquation>> {
        let gamma = self.st.gamma().clone();
        let nus = self.st.nu().to_vec();
        let members = gamma.members().to_vec();
        let mut seen: BTreeSet<ExpVec> = BTreeSet::new();
        let mut equations = Vec::new();
        for (i, &nu) in nus.iter().enumerate() {
            for &g in &members {
                let sum = nu + g;
                if !gamma.contains(sum) {
                    continue;
                }
                let mut c = self.st.a_choice(g).clone();
                c[i] += 1;
                if &c == self.st.a_choice(sum) {
                    continue;
                }
                if !seen.insert(c.clone()) {
                    continue;
                }
                let mut d = self.power(&c).sub(&self.power(&self.st.a_choice(sum).clone()));
                for delta in gamma.gamma_after(sum)? {
                    let e = d.coeff(delta).clone();
                    if !e.is_zero() {
                        let p = self.power(&self.st.a_choice(delta).clone());
                        d = d.sub_scaled(&e, &p);
                    }
                }
                for column in gamma.c_gamma_after(sum)? {
                    equations.push(VarietyEquation {
                        source: EquationSource::Xx { nu, gamma: g, column },
                        poly: d.coeff(column).clone(),
                    });
                }
            }
        }
        Ok(equations)
    }

    /// The relation-system coefficients and equations: for every degree
    /// with several decompositions and every non-distinguished one,
    /// `f^b − f^{a(γ)} = Σ_{γ' ∈ Γ(γ)} θ_{γ,γ';b} f^{a(γ')} + R`; the
    /// residual columns over `CΓ(γ)` are the equations.
    #[allow(clippy::type_complexity)]
    fn theta_and_xy(
        &mut self,
    ) -> Result<(
        BTreeMap<(usize, usize, ExpVec), SymPoly>,
        Vec<VarietyEquation>,
    )> {
        let gamma = self.st.gamma().clone();
        let mut thetas = BTreeMap::new();
        let mut equations = Vec::new();
        for &g in &self.st.dec_ge2().to_vec() {
            let a = self.st.a_choice(g).clone();
            for b in self.st.rel(g).to_vec() {
                if b == a {
                    continue;
                }
                let mut d = self.power(&b).sub(&self.power(&a));
                for g2 in gamma.gamma_after(g)? {
                    let t = d.coeff(g2).clone();
                    if !t.is_zero() {
                        let p = self.power(&self.st.a_choice(g2).clone());
                        d = d.sub_scaled(&t, &p);
                    }
                    thetas.insert((g, g2, b.clone()), t);
                }
                for column in gamma.c_gamma_after(g)? {
                    equations.push(VarietyEquation {
                        source: EquationSource::Xy {
                            gamma: g,
                            b: b.clone(),
                            column,
                        },
                        poly: d.coeff(column).clone(),
                    });
                }
            }
        }
        Ok((thetas, equations))
    }
}

// ---------------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------------

fn general_case(st: &GammaStructure) -> bool {
    st.s() >= 2 && !st.dec_ge2().is_empty()
}

fn require_general(st: &GammaStructure) -> Result<()> {
    if !general_case(st) {
        return Err(Error::InvalidParameter(format!(
            "degree set {:?} presents an affine space (single indecomposable, \
             or no degree with two decompositions); use the affine-space \
             presentation instead",
            st.gamma().members()
        )));
    }
    Ok(())
}

/// The ordered coordinate universe `{λ_{ν,j}}` of the variety of `Γ`.
pub fn variable_registry(spec: FieldSpec, st: &GammaStructure) -> Result<VarRegistry> {
    VarRegistry::new(spec, st)
}

/// The symbolic product-expansion family `η_{ν,γ;δ}`, keyed `(ν, γ, δ)`.
///
/// Each entry depends only on coordinates `λ_{ν',j}` with `j ≤ δ`.
pub fn symbolic_eta(
    spec: FieldSpec,
    st: &GammaStructure,
) -> Result<BTreeMap<(usize, usize, usize), SymPoly>> {
    SymCtx::new(spec, st)?.eta()
}

/// The symbolic relation coefficients `θ_{γ,γ';b}`, keyed `(γ, γ', b)`,
/// for every degree with at least two decompositions.
pub fn symbolic_theta(
    spec: FieldSpec,
    st: &GammaStructure,
) -> Result<BTreeMap<(usize, usize, ExpVec), SymPoly>> {
    if st.dec_ge2().is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no degree of {:?} has two decompositions; there are no relation \
             coefficients",
            st.gamma().members()
        )));
    }
    Ok(SymCtx::new(spec, st)?.theta_and_xy()?.0)
}

/// The full canonical coefficient table, with the decomposable rows as
/// polynomials in the indecomposable-row coordinates.
pub fn symbolic_lambda_table(
    spec: FieldSpec,
    st: &GammaStructure,
) -> Result<BTreeMap<(usize, usize), SymPoly>> {
    SymCtx::new(spec, st)?.lambda_table()
}

/// The symbolic change of basis `f_γ = f^{a(γ)} + Σ η_{γγ'} f^{a(γ')}`,
/// keyed `(γ, γ')`; specializing it at a concrete algebra gives that
/// algebra's change-of-basis table.
pub fn symbolic_basis_change(
    spec: FieldSpec,
    st: &GammaStructure,
) -> Result<BTreeMap<(usize, usize), SymPoly>> {
    SymCtx::new(spec, st)?.basis_change()
}

/// The product-obstruction equation system.
pub fn equations_xx(spec: FieldSpec, st: &GammaStructure) -> Result<Vec<VarietyEquation>> {
    require_general(st)?;
    SymCtx::new(spec, st)?.xx()
}

/// The relation equation system, its exact count
/// `l = Σ_{γ} (|Rel(γ)|−1)·|CΓ(γ)|`, and the dimension lower bound `n − l`.
pub fn equations_xy(
    spec: FieldSpec,
    st: &GammaStructure,
) -> Result<(Vec<VarietyEquation>, usize, i64)> {
    require_general(st)?;
    let mut ctx = SymCtx::new(spec, st)?;
    let n = ctx.reg.len();
    let (_, equations) = ctx.theta_and_xy()?;
    let mut l = 0usize;
    for &g in st.dec_ge2() {
        l += (st.rel(g).len() - 1) * st.gamma().c_gamma_after(g)?.len();
    }
    if equations.len() != l {
        return Err(Error::Internal(format!(
            "relation system has {} equations, the count formula gives {l}",
            equations.len()
        )));
    }
    Ok((equations, l, n as i64 - l as i64))
}

/// The affine-space presentations: a single indecomposable, or no degree
/// with two decompositions.  No equations; the dimension is exact.
pub fn affine_space_case(spec: FieldSpec, st: &GammaStructure) -> Result<VarietyPresentation> {
    if general_case(st) {
        return Err(Error::InvalidParameter(format!(
            "degree set {:?} has genuine equations; use the general \
             presentation",
            st.gamma().members()
        )));
    }
    let registry = VarRegistry::new(spec, st)?;
    let n = registry.len() as i64;
    Ok(VarietyPresentation {
        m: st.m(),
        gamma: st.gamma().members().to_vec(),
        kind: VarietyKind::AffineSpace,
        registry,
        equations_xx: Vec::new(),
        equations_xy: Vec::new(),
        l_xy: 0,
        dim_lower_bound: n,
    })
}

/// The presentation of the variety of `(m, Γ)`, dispatching on the case.
pub fn variety_presentation(spec: FieldSpec, gamma: &Gamma) -> Result<VarietyPresentation> {
    if gamma.is_empty() {
        return Ok(VarietyPresentation {
            m: gamma.m(),
            gamma: Vec::new(),
            kind: VarietyKind::Trivial,
            registry: VarRegistry::trivial(spec, gamma.m()),
            equations_xx: Vec::new(),
            equations_xy: Vec::new(),
            l_xy: 0,
            dim_lower_bound: 0,
        });
    }
    let st = structure(gamma)?;
    if !general_case(&st) {
        return affine_space_case(spec, &st);
    }
    let mut ctx = SymCtx::new(spec, &st)?;
    let equations_xx = ctx.xx()?;
    let (_, equations_xy) = ctx.theta_and_xy()?;
    let registry = ctx.reg;
    let mut l = 0usize;
    for &g in st.dec_ge2() {
        l += (st.rel(g).len() - 1) * st.gamma().c_gamma_after(g)?.len();
    }
    if equations_xy.len() != l {
        return Err(Error::Internal(format!(
            "relation system has {} equations, the count formula gives {l}",
            equations_xy.len()
        )));
    }
    let n = registry.len() as i64;
    Ok(VarietyPresentation {
        m: st.m(),
        gamma: gamma.members().to_vec(),
        kind: VarietyKind::General,
        registry,
        equations_xx,
        equations_xy,
        l_xy: l,
        dim_lower_bound: n - l as i64,
    })
}

/// The canonical coordinates killed on the fixed locus of the order-`n`
/// cyclic subgroup of the torus: every `λ_{γ,j}` (over all rows, the
/// decomposable ones flagged as induced) whose weight `j − γ` is not a
/// multiple of `n`.
pub fn fixed_point_equations(st: &GammaStructure, n: u64) -> Result<Vec<FixedPointVariable>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "the subgroup order must be at least 1".into(),
        ));
    }
    let mut killed = Vec::new();
    for &g in st.gamma().members() {
        let induced = st.dec().contains(&g);
        for j in st.gamma().c_gamma_after(g)? {
            let weight = j - g;
            if (weight as u64) % n != 0 {
                killed.push(FixedPointVariable {
                    row: g,
                    column: j,
                    weight,
                    induced,
                });
            }
        }
    }
    Ok(killed)
}
