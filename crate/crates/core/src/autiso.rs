//! Automorphism groups and isomorphism testing.
//!
//! The one-dimensional torus `{t_c : c ≠ 0}`, `t_c(x) = cx`, acts on the
//! class of subalgebras with conductor `x^m K[x]`.  It preserves the degree
//! set and rescales each canonical coefficient `λ_{γδ}` by `c^{δ-γ}`, so
//! both the automorphism group of an algebra and the isomorphism question
//! for two algebras reduce to *power conditions* on the torus parameter:
//!
//! * `Aut(A)` is the full torus exactly when `A` is monomial; otherwise it
//!   is the finite cyclic group of the `t_c` with `c^n = 1`, where `n` is
//!   the gcd of the exponents carried by the canonical units of the
//!   indecomposable degrees (its p-co-prime part in characteristic p);
//! * `A ≅ B` (same `m`, same degree set) exactly when the coefficient
//!   tables lie on one torus orbit, i.e. when the system
//!   `λ^{δ-ν} = λ'_{νδ}/λ_{νδ}` over the indecomposable rows is solvable.
//!
//! Solvability is decided exactly by gcd/Bézout arithmetic in the exponent
//! lattice; roots of unity and radicals are *described*, never
//! materialized, so every answer is closure-correct even though the
//! scalars live in ℚ or 𝔽_p.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gcd_bezout, gcd_of_set, p_coprime_divisor, FieldScalar, FieldSpec};
use crate::semigroup::{enumerate_s, order_tables};
use crate::subalgebra::{example_family, CanonicalAlgebra, ExampleFamily};
use crate::truncpoly::{Poly, TruncPoly};

/// The automorphism group of an algebra of the class, as restricted from
/// the torus action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum AutDescription {
    /// Every `t_c` fixes the algebra; this happens exactly for monomial
    /// algebras.
    FullTorus,
    /// The cyclic group `{t_c : c^order = 1}`, generated by `t_c` for `c`
    /// any primitive root of unity of order `generator_root_order` in the
    /// algebraic closure.  No such root is materialized; the generator is
    /// carried as this description.
    #[serde(rename_all = "camelCase")]
    Cyclic {
        order: u64,
        generator_root_order: u64,
    },
}

impl AutDescription {
    fn cyclic(n: u64) -> Self {
        AutDescription::Cyclic {
            order: n,
            generator_root_order: n,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, AutDescription::Cyclic { .. })
    }

    /// The group order; `None` for the torus.
    pub fn order(&self) -> Option<u64> {
        match self {
            AutDescription::FullTorus => None,
            AutDescription::Cyclic { order, .. } => Some(*order),
        }
    }
}

impl fmt::Display for AutDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutDescription::FullTorus => write!(f, "the full torus {{ t_c : c /= 0 }}"),
            AutDescription::Cyclic { order, .. } => write!(
                f,
                "cyclic of order {order}, generated by t_c for c a primitive root of unity of order {order}"
            ),
        }
    }
}

/// A single power condition `λ^exponent = value` on the torus parameter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerCondition {
    pub exponent: i64,
    pub value: FieldScalar,
}

impl PowerCondition {
    pub fn new(exponent: i64, value: FieldScalar) -> Self {
        PowerCondition { exponent, value }
    }
}

/// The outcome of a torus-orbit solvability test.
///
/// `forced_power = (g, μ)` means every solution of the listed conditions
/// satisfies `λ^g = μ`; the degenerate pair `(0, 1)` encodes an
/// unconstrained parameter.  When `solvable` is set, the scalars with
/// `λ^g = μ` in the algebraic closure exist, satisfy every one of
/// `checked_exponents`, and are exactly the solutions.  `obstruction`
/// names the reason a comparison failed and is `None` precisely when
/// `solvable` holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IsoWitness {
    pub solvable: bool,
    pub forced_power: PowerCondition,
    pub checked_exponents: Vec<PowerCondition>,
    pub obstruction: Option<String>,
}

impl IsoWitness {
    fn failed(spec: FieldSpec, obstruction: String) -> Self {
        IsoWitness {
            solvable: false,
            forced_power: PowerCondition::new(0, spec.one()),
            checked_exponents: Vec::new(),
            obstruction: Some(obstruction),
        }
    }
}

/// The gcd of the exponents carried by a unit `u = 1 + Σ_{d ≥ 1} a_d x^d`;
/// `None` when `u = 1` (such a unit puts no condition on the torus
/// parameter).
pub fn exponent_gcd(u: &TruncPoly) -> Result<Option<u64>> {
    if !u.coefficient_at(0).is_one() {
        return Err(Error::InvalidParameter(
            "the exponent gcd is only defined for units with constant term 1".into(),
        ));
    }
    let g = gcd_of_set(
        u.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, _)| d as u64),
    );
    Ok((g != 0).then_some(g))
}

/// The automorphism group of `A`.
///
/// `t_c` fixes `A` iff `c^{δ-γ} λ_{γδ} = λ_{γδ}` for every coefficient,
/// i.e. iff `c^n = 1` for `n` the gcd of the exponents of all canonical
/// units — computed here over the *indecomposable* degrees only, since
/// every decomposable-row coefficient is a weight-homogeneous polynomial
/// in the indecomposable ones and contributes no new exponent condition.
/// That reduction is re-verified on every call: the gcd over all degrees
/// must agree with the indecomposable one (in every characteristic, before
/// any p-reduction), and a mismatch reports an internal error.  In
/// characteristic p the group order is the p-co-prime part of the gcd,
/// because `c ↦ c^p` is bijective on the closure.
pub fn aut_group(alg: &CanonicalAlgebra) -> Result<AutDescription> {
    if alg.is_monomial() {
        return Ok(AutDescription::FullTorus);
    }
    let st = alg.structure().ok_or_else(|| {
        Error::Internal("a non-monomial algebra with an empty degree set".into())
    })?;
    let units = alg.canonical_units();
    let unit_of = |g: usize| -> Result<&TruncPoly> {
        units
            .unit(g)
            .ok_or_else(|| Error::Internal(format!("no canonical unit stored for degree {g}")))
    };
    let mut ind_parts = Vec::new();
    for &v in st.nu() {
        if let Some(g) = exponent_gcd(unit_of(v)?)? {
            ind_parts.push(g);
        }
    }
    let mut all_parts = Vec::new();
    for &g in alg.gamma().members() {
        if let Some(e) = exponent_gcd(unit_of(g)?)? {
            all_parts.push(e);
        }
    }
    let ind = gcd_of_set(ind_parts);
    let all = gcd_of_set(all_parts);
    if ind != all {
        return Err(Error::Internal(format!(
            "unit exponent gcd over indecomposables ({ind}) disagrees with the gcd over all degrees ({all})"
        )));
    }
    if ind == 0 {
        return Err(Error::Internal(
            "a non-monomial algebra whose indecomposable units are all trivial".into(),
        ));
    }
    let p = alg.spec().characteristic();
    let n = if p == 0 { ind } else { p_coprime_divisor(ind, p) };
    Ok(AutDescription::cyclic(n))
}

/// Decides whether a scalar `λ` exists in the algebraic closure with
/// `λ^{k_t} = c_t` for every listed condition.
///
/// With `g = gcd(k_t)` and Bézout coefficients `a_t`, any solution forces
/// `λ^g = Π c_t^{a_t} = μ`; conversely the `g`-th roots of `μ` (which the
/// closure always contains) satisfy every condition precisely when
/// `μ^{k_t/g} = c_t` for all `t`.  That check needs no root extraction, so
/// the verdict is exact over the ground field.  In characteristic p each
/// exponent is first replaced by its p-co-prime part: `λ ↦ λ^p` is
/// bijective on the closure and the identity on 𝔽_p itself (where the
/// `c_t` live), so `λ^{k p^s} = c` is equivalent to `λ^k = c`.  The
/// verification is run against both the reduced and the original
/// exponents.
pub fn torus_solve(spec: FieldSpec, conditions: &[PowerCondition]) -> Result<IsoWitness> {
    for c in conditions {
        if c.exponent == 0 {
            return Err(Error::InvalidParameter(
                "a power condition needs a nonzero exponent".into(),
            ));
        }
        if c.value.spec() != spec {
            return Err(Error::InvalidParameter(
                "a power condition value from a different field".into(),
            ));
        }
        if c.value.is_zero() {
            return Err(Error::InvalidParameter(
                "a power condition needs a nonzero value".into(),
            ));
        }
    }
    if conditions.is_empty() {
        return Ok(IsoWitness {
            solvable: true,
            forced_power: PowerCondition::new(0, spec.one()),
            checked_exponents: Vec::new(),
            obstruction: None,
        });
    }
    let p = spec.characteristic();
    let reduced: Vec<i64> = conditions
        .iter()
        .map(|c| {
            if p == 0 {
                c.exponent
            } else {
                c.exponent.signum() * p_coprime_divisor(c.exponent.unsigned_abs(), p) as i64
            }
        })
        .collect();
    let (g, coeffs) = gcd_bezout(&reduced);
    let mut mu = spec.one();
    for (c, a) in conditions.iter().zip(&coeffs) {
        mu = &mu * &c.value.pow(*a)?;
    }
    let mut solvable = true;
    for (c, &k) in conditions.iter().zip(&reduced) {
        for exponent in [k, c.exponent] {
            if exponent % g as i64 != 0 {
                return Err(Error::Internal(
                    "the exponent gcd does not divide a condition exponent".into(),
                ));
            }
            if mu.pow(exponent / g as i64)? != c.value {
                solvable = false;
            }
        }
    }
    Ok(IsoWitness {
        solvable,
        forced_power: PowerCondition::new(g as i64, mu),
        checked_exponents: conditions.to_vec(),
        obstruction: (!solvable)
            .then(|| "no scalar in the algebraic closure satisfies every power condition".into()),
    })
}

/// Decides `A ≅ B`.
///
/// Every isomorphism between algebras of the class is the restriction of
/// a torus map, so the test compares the conductor exponents and degree
/// sets, matches the zero/nonzero support of every indecomposable
/// canonical row, and then solves the power conditions
/// `λ^{δ-ν} = λ'_{νδ} / λ_{νδ}` over the indecomposable degrees `ν`
/// (decomposable rows are determined by these and need no conditions of
/// their own).  On success the witness describes the *full* isomorphism
/// set: the maps `t_λ` with `λ^g = μ`.
pub fn iso_test(a: &CanonicalAlgebra, b: &CanonicalAlgebra) -> Result<IsoWitness> {
    if a.spec() != b.spec() {
        return Err(Error::InvalidParameter(
            "isomorphism testing needs both algebras over the same field".into(),
        ));
    }
    let spec = a.spec();
    if a.m() != b.m() {
        return Ok(IsoWitness::failed(
            spec,
            format!("conductor exponents differ: {} vs {}", a.m(), b.m()),
        ));
    }
    if a.gamma().members() != b.gamma().members() {
        return Ok(IsoWitness::failed(
            spec,
            format!(
                "degree sets differ: {:?} vs {:?}",
                a.gamma().members(),
                b.gamma().members()
            ),
        ));
    }
    if a.gamma().is_empty() {
        // Both algebras are the one-point case K + x^m K[x].
        return torus_solve(spec, &[]);
    }
    let st = a
        .structure()
        .ok_or_else(|| Error::Internal("a nonempty degree set without structure".into()))?;
    let mut conditions = Vec::new();
    for &v in st.nu() {
        for d in a.gamma().c_gamma_after(v)? {
            let la = a.lambda_value(v, d);
            let lb = b.lambda_value(v, d);
            match (la.is_zero(), lb.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    conditions.push(PowerCondition::new((d - v) as i64, lb.div(&la)?));
                }
                _ => {
                    return Ok(IsoWitness::failed(
                        spec,
                        format!("coefficient supports differ at ({v}, {d})"),
                    ));
                }
            }
        }
    }
    torus_solve(spec, &conditions)
}

/// The image `t_c(A)` of a concrete torus map, `c ≠ 0`: every canonical
/// basis element `f(x)` is replaced by `f(cx)` and the canonical form is
/// recomputed from the results.  The image has the same degree set, with
/// `λ_{γδ}` rescaled by `c^{δ-γ}`.
pub fn dilate_algebra(alg: &CanonicalAlgebra, c: &FieldScalar) -> Result<CanonicalAlgebra> {
    if c.spec() != alg.spec() {
        return Err(Error::InvalidParameter(
            "the torus parameter lives in a different field".into(),
        ));
    }
    if c.is_zero() {
        return Err(Error::InvalidParameter(
            "the torus parameter must be nonzero".into(),
        ));
    }
    let mut gens = Vec::new();
    for &g in alg.gamma().members() {
        gens.push(poly_at_scaled_variable(
            &alg.basis_element(g)?.to_poly(),
            c,
        )?);
    }
    CanonicalAlgebra::from_generators(alg.spec(), alg.m(), &gens)
}

fn poly_at_scaled_variable(p: &Poly, c: &FieldScalar) -> Result<Poly> {
    let mut acc = Poly::zero(p.spec());
    for (d, a) in p.coeffs().iter().enumerate() {
        if !a.is_zero() {
            acc = &acc + &Poly::monomial(p.spec(), a * &c.pow(d as i64)?, d);
        }
    }
    Ok(acc)
}

/// One realized automorphism order: a one-generator algebra whose
/// automorphism group is cyclic of the stated order.
#[derive(Clone, Debug)]
pub struct OrderRealization {
    /// The realized order: the shift itself in characteristic 0, its
    /// p-co-prime part in characteristic p.
    pub order: u64,
    /// The shift `l` the construction used.
    pub shift: usize,
    /// The ambient degree set within which `l` is an order.
    pub ambient: Vec<usize>,
    /// The least degree `γ` of the ambient set with `γ + l ≤ m-1` outside
    /// it; the algebra is generated in this degree.
    pub witness_degree: usize,
    /// The generator `x^γ (1 + x^l)`.
    pub generator: Poly,
    /// The generated algebra; its own degree set is the cyclic one
    /// generated by the witness degree.
    pub algebra: CanonicalAlgebra,
}

impl Serialize for OrderRealization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(6))?;
        map.serialize_entry("order", &self.order)?;
        map.serialize_entry("shift", &self.shift)?;
        map.serialize_entry("ambient", &self.ambient)?;
        map.serialize_entry("witnessDegree", &self.witness_degree)?;
        map.serialize_entry("generator", &self.generator.render())?;
        map.serialize_entry("algebra", &self.algebra)?;
        map.end()
    }
}

/// Realizes every finite automorphism order over the field.
///
/// For each shift `l` of the order table `L(m)` the first degree set (in
/// enumeration order) admitting `l` is selected and the one-generator
/// family member `x^γ (1 + x^l)` is built; its automorphism order — `l`
/// in characteristic 0, `l_p` in characteristic p — is re-verified through
/// [`aut_group`].  The realized orders must cover the table `O(m)`
/// exactly; any gap or excess is an internal error.  When two shifts
/// realize the same order (possible only in characteristic p), the
/// smallest shift is kept.
pub fn realize_orders(
    spec: FieldSpec,
    m: usize,
) -> Result<BTreeMap<u64, OrderRealization>> {
    let p = spec.characteristic();
    let tables = order_tables(m, (p != 0).then_some(p))?;
    let semigroups = enumerate_s(m)?;
    let mut out: BTreeMap<u64, OrderRealization> = BTreeMap::new();
    for &l in &tables.l {
        let ambient = semigroups
            .iter()
            .find(|g| g.order_set_l(None).contains(&l))
            .ok_or_else(|| {
                Error::Internal(format!("no degree set for m = {m} admits the shift {l}"))
            })?;
        let algebra = example_family(
            spec,
            m,
            &ExampleFamily::GammaShift {
                gamma: ambient.members().to_vec(),
                l,
            },
        )?;
        let witness = ambient
            .members()
            .iter()
            .copied()
            .find(|&g| g + l <= m - 1 && !ambient.contains(g + l))
            .ok_or_else(|| {
                Error::Internal(format!("the shift {l} has no witness degree in {ambient:?}"))
            })?;
        let expected = if p == 0 {
            l as u64
        } else {
            p_coprime_divisor(l as u64, p)
        };
        let described = aut_group(&algebra)?;
        if described.order() != Some(expected) {
            return Err(Error::Internal(format!(
                "the shift {l} realized automorphism order {:?}, expected {expected}",
                described.order()
            )));
        }
        let generator = &Poly::monomial(spec, spec.one(), witness)
            + &Poly::monomial(spec, spec.one(), witness + l);
        out.entry(expected).or_insert(OrderRealization {
            order: expected,
            shift: l,
            ambient: ambient.members().to_vec(),
            witness_degree: witness,
            generator,
            algebra,
        });
    }
    let realized: Vec<u64> = out.keys().copied().collect();
    if realized != tables.o {
        return Err(Error::Internal(format!(
            "realized orders {realized:?} do not match the order table {:?}",
            tables.o
        )));
    }
    Ok(out)
}
