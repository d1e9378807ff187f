//! Truncated univariate series in `q = y^beta`, truncated Laurent expressions in `x^lambda y^phi`,
//! and wall-crossing automorphisms.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::{height, Root, RootSystem};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub normal: Root,
    /// Coefficient of `q^i` at index `i`, for `i = 0..=k`.
    pub coeffs: Vec<Q>,
}

impl TruncatedSeries {
    pub fn new(normal: Root, mut coeffs: Vec<Q>, k: usize) -> Self {
        coeffs.resize(k + 1, Q::zero());
        Self { normal, coeffs }
    }

    pub fn one(normal: Root, k: usize) -> Self {
        Self::new(normal, vec![Q::one()], k)
    }

    /// `1 + q`.
    pub fn binomial(normal: Root, k: usize) -> Self {
        Self::new(normal, vec![Q::one(), Q::one()], k)
    }

    pub fn k(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, k: usize) -> Self {
        Self::new(self.normal.clone(), self.coeffs[..=k.min(self.k())].to_vec(), k)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.normal != other.normal || self.k() != other.k() {
            return Err(Error::MixedNormals);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let k = self.k();
        let mut out = vec![Q::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs[..=k - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self { normal: self.normal.clone(), coeffs: out })
    }

    pub fn invert(&self) -> Self {
        assert!(!self.coeffs[0].is_zero(), "series with zero constant term is not invertible");
        let k = self.k();
        let c0 = self.coeffs[0].recip();
        let mut out = vec![Q::zero(); k + 1];
        out[0] = c0.clone();
        for m in 1..=k {
            let s: Q = (1..=m).map(|i| &self.coeffs[i] * &out[m - i]).sum();
            out[m] = -s * &c0;
        }
        Self { normal: self.normal.clone(), coeffs: out }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut result = Self::one(self.normal.clone(), self.k());
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b).unwrap();
            }
            b = b.mul(&b).unwrap();
            e >>= 1;
        }
        result
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    normal: Root,
    coeffs: Vec<String>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson { normal: self.normal.clone(), coeffs: self.coeffs.iter().map(fmt_q).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| parse_q(c).ok_or_else(|| serde::de::Error::custom(format!("bad rational {c}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            return Err(serde::de::Error::custom("empty series"));
        }
        Ok(Self { normal: j.normal, coeffs })
    }
}

/// The series on the imaginary wall in `q = y^delta`.
pub fn f_inf_series(delta: &[i64], is_a2k2: bool, k: usize) -> TruncatedSeries {
    let one_minus = TruncatedSeries::new(delta.to_vec(), vec![q(1), q(-1)], k);
    let base = one_minus.pow(-2);
    if is_a2k2 {
        TruncatedSeries::binomial(delta.to_vec(), k).mul(&base).unwrap()
    } else {
        base
    }
}

/// A monomial `x^lambda y^phi`, with `lambda` in fundamental-weight coordinates and `phi` in
/// root coordinates.
pub type Monomial = (Vec<i64>, Vec<i64>);

/// Finite sums of monomials with rational coefficients, truncated at total `y`-degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMonomialExpr {
    pub terms: BTreeMap<Monomial, Q>,
    pub k: i64,
}

impl LaurentMonomialExpr {
    pub fn zero(k: i64) -> Self {
        Self { terms: BTreeMap::new(), k }
    }

    pub fn monomial(lambda: Vec<i64>, phi: Vec<i64>, coeff: Q, k: i64) -> Self {
        let mut e = Self::zero(k);
        e.add_term((lambda, phi), coeff);
        e
    }

    /// `x^{rho_i}`.
    pub fn x(n: usize, i: usize, k: i64) -> Self {
        let mut l = vec![0; n];
        l[i] = 1;
        Self::monomial(l, vec![0; n], Q::one(), k)
    }

    /// `y^{alpha_i}`.
    pub fn y(n: usize, i: usize, k: i64) -> Self {
        let mut p = vec![0; n];
        p[i] = 1;
        Self::monomial(vec![0; n], p, Q::one(), k)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() || height(&m.1) > self.k {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.k = self.k.min(other.k);
        out.terms.retain(|m, _| height(&m.1) <= out.k);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.k);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.k.min(other.k));
        for ((l1, p1), c1) in &self.terms {
            for ((l2, p2), c2) in &other.terms {
                let phi: Vec<i64> = p1.iter().zip(p2).map(|(a, b)| a + b).collect();
                if height(&phi) > out.k {
                    continue;
                }
                let lambda = l1.iter().zip(l2).map(|(a, b)| a + b).collect();
                out.add_term((lambda, phi), c1 * c2);
            }
        }
        out
    }

    /// Multiplies by `f^e`, where `f` is a series in `y^beta`.
    pub fn mul_series_pow(&self, f: &TruncatedSeries, e: i64) -> Self {
        if e == 0 {
            return self.clone();
        }
        let fe = f.pow(e);
        let h = height(&f.normal);
        let mut out = Self::zero(self.k);
        for ((lambda, phi), c) in &self.terms {
            for (j, a) in fe.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if height(phi) + j as i64 * h > self.k {
                    break;
                }
                let p: Vec<i64> = phi.iter().zip(&f.normal).map(|(x, b)| x + j as i64 * b).collect();
                out.add_term((lambda.clone(), p), c * a);
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

/// Which side a path enters a wall from. `AgainstNormal` moves from `<x, beta> > 0` to
/// `<x, beta> < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    WithNormal,
    AgainstNormal,
}

/// What a wall crossing needs: the exchange matrix giving `omega(alpha_i^vee, alpha_j)`.
#[derive(Debug, Clone)]
pub struct CrossingForm {
    pub b: Vec<Vec<i64>>,
}

impl CrossingForm {
    /// Exponents `<lambda, beta^vee>` and `omega(beta^vee, phi)` for the primitive coroot.
    fn exponents(&self, coroot: &[i64], lambda: &[i64], phi: &[i64]) -> i64 {
        let n = coroot.len();
        let mut e = 0;
        for i in 0..n {
            if coroot[i] == 0 {
                continue;
            }
            e += coroot[i] * lambda[i];
            e += coroot[i] * (0..n).map(|j| self.b[i][j] * phi[j]).sum::<i64>();
        }
        e
    }
}

/// Applies the automorphism attached to crossing `(normal, f)`.
pub fn wall_cross(
    rs: &RootSystem,
    form: &CrossingForm,
    m: &LaurentMonomialExpr,
    f: &TruncatedSeries,
    direction: Direction,
) -> LaurentMonomialExpr {
    if f.is_one() {
        return m.clone();
    }
    let coroot = rs.primitive_coroot(&f.normal);
    let sign = match direction {
        Direction::AgainstNormal => 1,
        Direction::WithNormal => -1,
    };
    let mut out = LaurentMonomialExpr::zero(m.k);
    for ((lambda, phi), c) in &m.terms {
        let e = sign * form.exponents(&coroot, lambda, phi);
        let term = LaurentMonomialExpr::monomial(lambda.clone(), phi.clone(), c.clone(), m.k);
        out = out.add(&term.mul_series_pow(f, e));
    }
    out
}

/// Composes the crossings in order: the first wall acts first.
pub fn path_product(
    rs: &RootSystem,
    form: &CrossingForm,
    walls: &[(&TruncatedSeries, Direction)],
    m: &LaurentMonomialExpr,
) -> LaurentMonomialExpr {
    let mut cur = m.clone();
    for (f, d) in walls {
        if height(&f.normal) > m.k {
            debug_assert!(f.truncate(0).is_one());
            continue;
        }
        cur = wall_cross(rs, form, &cur, f, *d);
    }
    cur
}

/// The basis monomials `x^{rho_i}` and `y^{alpha_i}` used in loop checks.
pub fn basis_monomials(n: usize, k: i64) -> Vec<LaurentMonomialExpr> {
    (0..n)
        .map(|i| LaurentMonomialExpr::x(n, i, k))
        .chain((0..n).map(|i| LaurentMonomialExpr::y(n, i, k)))
        .collect()
}
