//! Multivariate polynomials with symbolic variables over an exact field.
//!
//! The defining equations of the classifying varieties are polynomials in
//! the coefficient parameters `λ_{ν,j}`.  This module provides the small
//! polynomial arithmetic needed to manufacture those equations exactly:
//! terms are kept in a graded-lexicographic map, coefficients live in the
//! same exact scalars as everything else, and no zero coefficient is ever
//! stored.
//!
//! A [`SymPoly`] knows only the *arity* of its variable universe; the
//! human-readable names (and torus weights) of the variables belong to the
//! single registry of the enclosing presentation, which passes names in
//! for rendering.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::field::{FieldScalar, FieldSpec};

/// Exponent vector of a single monomial in a fixed number of variables.
///
/// Ordered graded-lexicographically: first by total degree, ties broken by
/// the lexicographic order of the exponent vectors.  The *largest* monomial
/// of a polynomial under this order is its leading monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    /// The exponent of each variable, indexed by the universe order.
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Sum of all exponents.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn product(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len(), "monomial arity mismatch");
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An exact multivariate polynomial in a fixed, ordered variable universe.
///
/// Invariant: the term map never holds a zero coefficient, so structural
/// equality is semantic equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymPoly {
    spec: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldScalar>,
}

impl SymPoly {
    /// The zero polynomial.
    pub fn zero(spec: FieldSpec, nvars: usize) -> Self {
        SymPoly {
            spec,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(nvars: usize, value: FieldScalar) -> Self {
        let spec = value.spec();
        let mut poly = SymPoly::zero(spec, nvars);
        if !value.is_zero() {
            poly.terms.insert(Monomial::constant(nvars), value);
        }
        poly
    }

    /// The polynomial consisting of the single variable `index`.
    pub fn variable(spec: FieldSpec, nvars: usize, index: usize) -> Self {
        let mut poly = SymPoly::zero(spec, nvars);
        poly.terms
            .insert(Monomial::variable(nvars, index), spec.one());
        poly
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldScalar)> {
        self.terms.iter()
    }

    /// Indices of the variables that actually occur.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut used = BTreeSet::new();
        for monomial in self.terms.keys() {
            for (index, e) in monomial.exponents().iter().enumerate() {
                if *e > 0 {
                    used.insert(index);
                }
            }
        }
        used
    }

    /// The set of weighted degrees `Σ e_i w_i` over all terms, for the given
    /// per-variable weights.  A polynomial is homogeneous for `weights` when
    /// this set has at most one element.
    pub fn term_weights(&self, weights: &[i64]) -> BTreeSet<i64> {
        assert_eq!(weights.len(), self.nvars, "weight vector arity mismatch");
        self.terms
            .keys()
            .map(|monomial| {
                monomial
                    .exponents()
                    .iter()
                    .zip(weights)
                    .map(|(e, w)| i64::from(*e) * *w)
                    .sum()
            })
            .collect()
    }

    /// True when every term has the same weighted degree (vacuously true for
    /// the zero polynomial).
    pub fn is_homogeneous(&self, weights: &[i64]) -> bool {
        self.term_weights(weights).len() <= 1
    }

    /// Evaluate at a point, one scalar per variable.
    pub fn eval(&self, values: &[FieldScalar]) -> FieldScalar {
        assert_eq!(values.len(), self.nvars, "evaluation arity mismatch");
        let mut total = self.spec.zero();
        for (monomial, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (index, e) in monomial.exponents().iter().enumerate() {
                for _ in 0..*e {
                    term = &term * &values[index];
                }
            }
            total += &term;
        }
        total
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &FieldScalar) -> SymPoly {
        if c.is_zero() {
            return SymPoly::zero(self.spec, self.nvars);
        }
        let mut out = self.clone();
        for coeff in out.terms.values_mut() {
            *coeff = &*coeff * c;
        }
        out
    }

    /// The monic associate: divide by the leading (graded-lex largest)
    /// coefficient.  The zero polynomial is returned unchanged.
    pub fn normalized(&self) -> SymPoly {
        match self.terms.values().next_back() {
            None => self.clone(),
            Some(leading) => {
                let inverse = leading
                    .inv()
                    .expect("leading coefficient of a stored term is nonzero");
                self.scale(&inverse)
            }
        }
    }

    fn add_term(&mut self, monomial: Monomial, coeff: &FieldScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&monomial) {
            Some(existing) => {
                *existing += coeff;
                if existing.is_zero() {
                    self.terms.remove(&monomial);
                }
            }
            None => {
                self.terms.insert(monomial, coeff.clone());
            }
        }
    }

    fn check_compatible(&self, other: &SymPoly) {
        assert_eq!(self.spec, other.spec, "mixed fields in SymPoly arithmetic");
        assert_eq!(
            self.nvars, other.nvars,
            "mixed variable universes in SymPoly arithmetic"
        );
    }

    /// Render with the given variable names, terms in descending order.
    ///
    /// Examples of the shape produced: `3*a - 2*b`, `a^2*b + 1/2*c - 4`,
    /// `0` for the zero polynomial.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars, "name list arity mismatch");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (position, (monomial, coeff)) in self.terms.iter().rev().enumerate() {
            let rendered = coeff.to_string();
            let (negative, magnitude) = match rendered.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, rendered),
            };
            if position == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if magnitude != "1" || monomial.total_degree() == 0 {
                factors.push(magnitude);
            }
            for (index, e) in monomial.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[index].clone()),
                    _ => {
                        let mut power = names[index].clone();
                        let _ = write!(power, "^{e}");
                        factors.push(power);
                    }
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;

    fn add(self, rhs: &SymPoly) -> SymPoly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (monomial, coeff) in &rhs.terms {
            out.add_term(monomial.clone(), coeff);
        }
        out
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;

    fn sub(self, rhs: &SymPoly) -> SymPoly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (monomial, coeff) in &rhs.terms {
            out.add_term(monomial.clone(), &-coeff);
        }
        out
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;

    fn neg(self) -> SymPoly {
        let mut out = self.clone();
        for coeff in out.terms.values_mut() {
            *coeff = -&*coeff;
        }
        out
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;

    fn mul(self, rhs: &SymPoly) -> SymPoly {
        self.check_compatible(rhs);
        let mut out = SymPoly::zero(self.spec, self.nvars);
        for (left, a) in &self.terms {
            for (right, b) in &rhs.terms {
                out.add_term(left.product(right), &(a * b));
            }
        }
        out
    }
}

impl Serialize for SymPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            coefficient: String,
            monomial: &'a [u32],
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (monomial, coeff) in self.terms.iter().rev() {
            seq.serialize_element(&Term {
                coefficient: coeff.to_string(),
                monomial: monomial.exponents(),
            })?;
        }
        seq.end()
    }
}
