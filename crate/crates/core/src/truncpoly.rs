//! Polynomials: full `K[x]`, the truncation `F = K[x]/(x^m)`, and conductor
//! elements of `x^m K[x]` in module coordinates.
//!
//! A conductor element is stored through the decomposition
//! `x^m K[x] = ⊕_{i=0}^{m-1} K[x^m] x^{m+i}`: the element is
//! `Σ_i p_i(x^m) x^{m+i}` and the record keeps the coordinate polynomials
//! `p_i(y)`.  Splitting a polynomial into its part below degree `m` and its
//! conductor part is exact and loss-free in both directions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};

/// A polynomial in `K[x]`, dense, with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    spec: FieldSpec,
    coeffs: Vec<FieldScalar>,
}

impl Poly {
    pub fn zero(spec: FieldSpec) -> Self {
        Poly {
            spec,
            coeffs: Vec::new(),
        }
    }

    pub fn one(spec: FieldSpec) -> Self {
        Self::monomial(spec, spec.one(), 0)
    }

    /// `c * x^d`.
    pub fn monomial(spec: FieldSpec, c: FieldScalar, d: usize) -> Self {
        assert_eq!(c.spec(), spec, "coefficient from the wrong field");
        let mut coeffs = vec![spec.zero(); d + 1];
        coeffs[d] = c;
        let mut p = Poly { spec, coeffs };
        p.trim();
        p
    }

    /// Builds from a dense coefficient list (index = degree).
    pub fn from_coeffs(spec: FieldSpec, coeffs: Vec<FieldScalar>) -> Self {
        for c in &coeffs {
            assert_eq!(c.spec(), spec, "coefficient from the wrong field");
        }
        let mut p = Poly { spec, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(FieldScalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order: the lowest degree with nonzero coefficient (`None` for 0).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Coefficient of `x^j` (zero beyond the stored length).
    pub fn coefficient_at(&self, j: usize) -> FieldScalar {
        self.coeffs.get(j).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn scale(&self, c: &FieldScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.spec);
        }
        Poly::from_coeffs(self.spec, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.spec.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { spec: self.spec, coeffs }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.spec);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `x -> x^k` (`k >= 1`).
    pub fn dilate(&self, k: usize) -> Poly {
        assert!(k >= 1);
        let mut coeffs = vec![self.spec.zero(); self.coeffs.len().saturating_mul(k)];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * k] = c.clone();
            }
        }
        Poly::from_coeffs(self.spec, coeffs)
    }

    /// Reduction mod `x^m`.
    pub fn truncate(&self, m: usize) -> TruncPoly {
        let mut coeffs: Vec<FieldScalar> = self.coeffs.iter().take(m).cloned().collect();
        coeffs.resize(m, self.spec.zero());
        TruncPoly {
            spec: self.spec,
            coeffs,
        }
    }

    /// Splits into the part below degree `m` and the conductor part, so that
    /// `self = low + high` with `low` of degree `< m` and `high ∈ x^m K[x]`.
    pub fn split_conductor(&self, m: usize) -> (TruncPoly, ConductorElement) {
        assert!(m >= 1);
        let low = self.truncate(m);
        let mut coords = vec![Vec::new(); m];
        for (j, c) in self.coeffs.iter().enumerate().skip(m) {
            if c.is_zero() {
                continue;
            }
            // x^j = (x^m)^q * x^{m+i} with j - m = q*m + i, 0 <= i < m.
            let q = (j - m) / m;
            let i = (j - m) % m;
            if coords[i].len() <= q {
                coords[i].resize(q + 1, self.spec.zero());
            }
            coords[i][q] = c.clone();
        }
        let coords = coords
            .into_iter()
            .map(|cs| Poly::from_coeffs(self.spec, cs))
            .collect();
        (
            low,
            ConductorElement {
                spec: self.spec,
                m,
                coords,
            },
        )
    }

    /// Renders as text, lowest degree first: `x^2 - 3/2 x^5`.
    pub fn render(&self) -> String {
        render_terms(self.spec, self.coeffs.iter().enumerate())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.spec, rhs.spec);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| &self.coefficient_at(i) + &rhs.coefficient_at(i))
            .collect();
        Poly::from_coeffs(self.spec, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.spec, rhs.spec);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| &self.coefficient_at(i) - &rhs.coefficient_at(i))
            .collect();
        Poly::from_coeffs(self.spec, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.spec, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.spec, rhs.spec);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.spec);
        }
        let mut coeffs = vec![self.spec.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                coeffs[i + j] += &t;
            }
        }
        Poly::from_coeffs(self.spec, coeffs)
    }
}

/// An element of `F = K[x]/(x^m)`, stored as exactly `m` coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncPoly {
    spec: FieldSpec,
    coeffs: Vec<FieldScalar>,
}

impl TruncPoly {
    pub fn zero(spec: FieldSpec, m: usize) -> Self {
        assert!(m >= 1);
        TruncPoly {
            spec,
            coeffs: vec![spec.zero(); m],
        }
    }

    pub fn one(spec: FieldSpec, m: usize) -> Self {
        Self::monomial(spec, m, spec.one(), 0)
    }

    /// `c * x^d` in `F` (zero if `d >= m`).
    pub fn monomial(spec: FieldSpec, m: usize, c: FieldScalar, d: usize) -> Self {
        let mut t = Self::zero(spec, m);
        if d < m {
            t.coeffs[d] = c;
        }
        t
    }

    pub fn from_coeffs(spec: FieldSpec, coeffs: Vec<FieldScalar>) -> Self {
        assert!(!coeffs.is_empty());
        for c in &coeffs {
            assert_eq!(c.spec(), spec, "coefficient from the wrong field");
        }
        TruncPoly { spec, coeffs }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldScalar::is_zero)
    }

    /// Lowest degree with nonzero coefficient (`None` for 0).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coefficient_at(&self, j: usize) -> FieldScalar {
        self.coeffs.get(j).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    fn check_compatible(&self, rhs: &TruncPoly) -> Result<()> {
        if self.m() != rhs.m() {
            return Err(Error::MismatchedTruncation {
                left: self.m(),
                right: rhs.m(),
            });
        }
        if self.spec != rhs.spec {
            return Err(Error::InvalidParameter(
                "operands over different fields".into(),
            ));
        }
        Ok(())
    }

    /// Product in `F` with explicit compatibility errors.
    pub fn checked_mul(&self, rhs: &TruncPoly) -> Result<TruncPoly> {
        self.check_compatible(rhs)?;
        let m = self.m();
        let mut coeffs = vec![self.spec.zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(m - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                coeffs[i + j] += &t;
            }
        }
        Ok(TruncPoly { spec: self.spec, coeffs })
    }

    pub fn scale(&self, c: &FieldScalar) -> TruncPoly {
        TruncPoly {
            spec: self.spec,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> TruncPoly {
        let mut acc = TruncPoly::one(self.spec, self.m());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Lift to `K[x]` (degree `< m`).
    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(self.spec, self.coeffs.clone())
    }

    pub fn render(&self) -> String {
        render_terms(self.spec, self.coeffs.iter().enumerate())
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &TruncPoly {
    type Output = TruncPoly;
    fn add(self, rhs: &TruncPoly) -> TruncPoly {
        self.check_compatible(rhs).expect("incompatible truncations");
        TruncPoly {
            spec: self.spec,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &TruncPoly {
    type Output = TruncPoly;
    fn sub(self, rhs: &TruncPoly) -> TruncPoly {
        self.check_compatible(rhs).expect("incompatible truncations");
        TruncPoly {
            spec: self.spec,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &TruncPoly {
    type Output = TruncPoly;
    fn neg(self) -> TruncPoly {
        TruncPoly {
            spec: self.spec,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncPoly {
    type Output = TruncPoly;
    fn mul(self, rhs: &TruncPoly) -> TruncPoly {
        self.checked_mul(rhs).expect("incompatible truncations")
    }
}

impl Serialize for TruncPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("m", &self.m())?;
        let strings: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        map.serialize_entry("coeffs", &strings)?;
        map.end()
    }
}

/// An element of the conductor ideal `x^m K[x]`, in module coordinates:
/// the element `Σ_{i=0}^{m-1} p_i(x^m) x^{m+i}` is stored as the list of
/// coordinate polynomials `p_i(y)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConductorElement {
    spec: FieldSpec,
    m: usize,
    coords: Vec<Poly>,
}

impl ConductorElement {
    pub fn zero(spec: FieldSpec, m: usize) -> Self {
        assert!(m >= 1);
        ConductorElement {
            spec,
            m,
            coords: vec![Poly::zero(spec); m],
        }
    }

    /// The coordinate form of a polynomial already in `x^m K[x]`;
    /// errors if `p` has a term of degree `< m`.
    pub fn from_poly(p: &Poly, m: usize) -> Result<Self> {
        let (low, high) = p.split_conductor(m);
        if !low.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "polynomial has a term of degree < {m}, not a conductor element"
            )));
        }
        Ok(high)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Poly::is_zero)
    }

    /// Coordinate polynomial `p_i(y)` of the summand `p_i(x^m) x^{m+i}`.
    pub fn coord(&self, i: usize) -> &Poly {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    /// Expands back to an honest polynomial in `K[x]`.
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::zero(self.spec);
        for (i, p) in self.coords.iter().enumerate() {
            // p(x^m) * x^{m+i}
            acc = &acc + &p.dilate(self.m).shift(self.m + i);
        }
        acc
    }

    pub fn scale(&self, c: &FieldScalar) -> ConductorElement {
        ConductorElement {
            spec: self.spec,
            m: self.m,
            coords: self.coords.iter().map(|p| p.scale(c)).collect(),
        }
    }
}

impl Add for &ConductorElement {
    type Output = ConductorElement;
    fn add(self, rhs: &ConductorElement) -> ConductorElement {
        assert_eq!(self.m, rhs.m, "incompatible truncations");
        ConductorElement {
            spec: self.spec,
            m: self.m,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ConductorElement {
    type Output = ConductorElement;
    fn sub(self, rhs: &ConductorElement) -> ConductorElement {
        assert_eq!(self.m, rhs.m, "incompatible truncations");
        ConductorElement {
            spec: self.spec,
            m: self.m,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Serialize for ConductorElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("m", &self.m)?;
        struct Coords<'a>(&'a [Poly]);
        impl Serialize for Coords<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for p in self.0 {
                    let strings: Vec<String> =
                        p.coeffs().iter().map(|c| c.to_string()).collect();
                    seq.serialize_element(&strings)?;
                }
                seq.end()
            }
        }
        map.serialize_entry("coords", &Coords(&self.coords))?;
        map.end()
    }
}

fn render_terms<'a, I>(spec: FieldSpec, coeffs: I) -> String
where
    I: Iterator<Item = (usize, &'a FieldScalar)>,
{
    let mut out = String::new();
    for (d, c) in coeffs {
        if c.is_zero() {
            continue;
        }
        let (sign_neg, mag) = match c {
            FieldScalar::Rat(q) if q.numer().sign() == num_bigint::Sign::Minus => {
                (true, -c)
            }
            _ => (false, c.clone()),
        };
        if out.is_empty() {
            if sign_neg {
                out.push('-');
            }
        } else {
            out.push_str(if sign_neg { " - " } else { " + " });
        }
        let coeff_txt = mag.to_string();
        if d == 0 {
            out.push_str(&coeff_txt);
        } else {
            if !mag.is_one() {
                out.push_str(&coeff_txt);
                // A space separates a fraction from the variable: "3/2 x^5".
                if coeff_txt.contains('/') {
                    out.push(' ');
                }
            }
            out.push('x');
            if d != 1 {
                out.push_str(&format!("^{d}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    let _ = spec;
    out
}

/// Parses the textual polynomial grammar: terms joined by `+`/`-`, each an
/// optional rational coefficient followed by an optional power of `x`, e.g.
/// `x^2 + 3/2 x^5`, `2x^3 - 1`, `-x`.  Implicit multiplication is allowed
/// only between a coefficient and its monomial.
pub fn parse_poly(spec: FieldSpec, input: &str) -> Result<Poly> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = Poly::zero(spec);
    let bytes = s.as_bytes();
    let mut pos = 0usize;
    while pos < bytes.len() {
        // Signs: any run of '+'/'-' before a term; parity of '-' counts.
        let mut negative = false;
        loop {
            skip_ws(bytes, &mut pos);
            match bytes.get(pos) {
                Some(b'+') => pos += 1,
                Some(b'-') => {
                    negative = !negative;
                    pos += 1;
                }
                _ => break,
            }
        }
        skip_ws(bytes, &mut pos);
        if pos >= bytes.len() {
            return Err(Error::Parse(format!("dangling sign in {input:?}")));
        }
        // Optional coefficient.
        let mut coeff = None;
        if bytes[pos].is_ascii_digit() {
            let num = read_uint(bytes, &mut pos, input)?;
            let mut save = pos;
            skip_ws(bytes, &mut save);
            if bytes.get(save) == Some(&b'/') {
                let mut after = save + 1;
                skip_ws(bytes, &mut after);
                if after < bytes.len() && bytes[after].is_ascii_digit() {
                    pos = after;
                    let den = read_uint(bytes, &mut pos, input)?;
                    coeff = Some(spec.parse_scalar(&format!("{num}/{den}"))?);
                } else {
                    return Err(Error::Parse(format!("bad fraction in {input:?}")));
                }
            } else {
                coeff = Some(spec.parse_scalar(&num)?);
            }
        }
        skip_ws(bytes, &mut pos);
        // Optional monomial.
        let mut degree = None;
        if bytes.get(pos) == Some(&b'x') {
            pos += 1;
            skip_ws(bytes, &mut pos);
            if bytes.get(pos) == Some(&b'^') {
                pos += 1;
                skip_ws(bytes, &mut pos);
                if pos >= bytes.len() || !bytes[pos].is_ascii_digit() {
                    return Err(Error::Parse(format!("bad exponent in {input:?}")));
                }
                let e = read_uint(bytes, &mut pos, input)?;
                let e: usize = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("exponent too large in {input:?}")))?;
                degree = Some(e);
            } else {
                degree = Some(1);
            }
        }
        let (coeff, degree) = match (coeff, degree) {
            (None, None) => {
                return Err(Error::Parse(format!(
                    "expected a term at byte {pos} of {input:?}"
                )))
            }
            (c, d) => (c.unwrap_or_else(|| spec.one()), d.unwrap_or(0)),
        };
        let coeff = if negative { -&coeff } else { coeff };
        acc = &acc + &Poly::monomial(spec, coeff, degree);
        skip_ws(bytes, &mut pos);
        match bytes.get(pos) {
            None | Some(b'+') | Some(b'-') => {}
            Some(&c) => {
                return Err(Error::Parse(format!(
                    "unexpected {:?} at byte {pos} of {input:?}",
                    c as char
                )))
            }
        }
    }
    Ok(acc)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while bytes.get(*pos).is_some_and(u8::is_ascii_whitespace) {
        *pos += 1;
    }
}

fn read_uint(bytes: &[u8], pos: &mut usize, input: &str) -> Result<String> {
    let start = *pos;
    while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse(format!("expected digits in {input:?}")));
    }
    Ok(std::str::from_utf8(&bytes[start..*pos]).unwrap().to_string())
}
