//! Exchange matrices, symmetrizable Cartan data, reflections, classification and real roots.
//!
//! Root-lattice vectors are integer coordinate vectors on the simple roots. Weights are
//! rational coordinate vectors on the fundamental weights `rho_i`, with
//! `<rho_i, alpha_j^vee> = delta_ij`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynkin;
use crate::rational::{det, kernel, primitive, q, Q};

/// Integer vector in simple-root coordinates.
pub type Root = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("matrix is not square or dimensions disagree")]
    Shape,
    #[error("matrix is not skew-symmetrizable")]
    NotSkewSymmetrizable,
    #[error("vector is not a real root")]
    NotRealRoot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    pub n: usize,
    pub b: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    pub fn new(b: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = b.len();
        if b.iter().any(|r| r.len() != n) {
            return Err(CartanError::Shape);
        }
        let m = Self { n, b };
        symmetrizer(&m)?;
        Ok(m)
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let raw: ExchangeMatrix = serde_json::from_str(s).map_err(|e| e.to_string())?;
        if raw.b.len() != raw.n {
            return Err(format!("n = {} but b has {} rows", raw.n, raw.b.len()));
        }
        Self::new(raw.b).map_err(|e| e.to_string())
    }

    pub fn transpose(&self) -> Self {
        let b = (0..self.n).map(|i| (0..self.n).map(|j| self.b[j][i]).collect()).collect();
        Self { n: self.n, b }
    }

    pub fn negate(&self) -> Self {
        let b = self.b.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Self { n: self.n, b }
    }

    /// A linear order with `i` before `j` whenever `b_ij > 0`, or `None` if the sign
    /// digraph has a directed cycle. Ties are broken by smallest index.
    pub fn acyclic_order(&self) -> Option<Vec<usize>> {
        let n = self.n;
        let mut indeg = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if self.b[i][j] > 0 {
                    indeg[j] += 1;
                }
            }
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for j in 0..n {
                if self.b[i][j] > 0 {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        ready.insert(j);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic_order().is_some()
    }
}

/// Integers `e_i = d_i^{-1}` with `e_j b_ij = -e_i b_ji`, primitive on each connected component.
fn symmetrizer(m: &ExchangeMatrix) -> Result<Vec<i64>, CartanError> {
    let n = m.n;
    let b = &m.b;
    for i in 0..n {
        if b[i][i] != 0 {
            return Err(CartanError::NotSkewSymmetrizable);
        }
        for j in 0..n {
            if (b[i][j] == 0) != (b[j][i] == 0) || (b[i][j] != 0 && b[i][j].signum() == b[j][i].signum()) {
                return Err(CartanError::NotSkewSymmetrizable);
            }
        }
    }
    let mut e: Vec<Option<Q>> = vec![None; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for root in 0..n {
        if e[root].is_some() {
            continue;
        }
        e[root] = Some(Q::one());
        let mut comp = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if b[i][j] != 0 && e[j].is_none() {
                    let ej = -e[i].clone().unwrap() * q(b[j][i]) / q(b[i][j]);
                    e[j] = Some(ej);
                    comp.push(j);
                    queue.push_back(j);
                }
            }
        }
        comps.push(comp);
    }
    let e: Vec<Q> = e.into_iter().map(Option::unwrap).collect();
    for i in 0..n {
        for j in 0..n {
            if &e[j] * q(b[i][j]) != -(&e[i] * q(b[j][i])) {
                return Err(CartanError::NotSkewSymmetrizable);
            }
        }
    }
    let mut out = vec![0i64; n];
    for comp in comps {
        let vals: Vec<Q> = comp.iter().map(|&i| e[i].clone()).collect();
        for (&i, v) in comp.iter().zip(primitive(&vals)) {
            out[i] = v;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    pub a: Vec<Vec<i64>>,
    /// `d_i^{-1}`, positive integers with overall gcd one.
    pub dinv: Vec<i64>,
}

impl CartanMatrix {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn d(&self, i: usize) -> Q {
        Q::new(1.into(), self.dinv[i].into())
    }
}

pub fn exchange_to_cartan(b: &ExchangeMatrix) -> Result<CartanMatrix, CartanError> {
    let dinv = symmetrizer(b)?;
    let n = b.n;
    let a = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 2 } else { -b.b[i][j].abs() }).collect())
        .collect();
    Ok(CartanMatrix { a, dinv })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineTypeInfo {
    pub label: String,
    pub delta: Root,
    pub aff_index: usize,
    pub is_a2k2: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CartanType {
    Finite,
    Affine(AffineTypeInfo),
    Indefinite,
}

/// The root datum of a symmetrizable Cartan matrix together with the symmetric form `K`.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub cartan: CartanMatrix,
    /// `K(alpha_i, alpha_j) = d_i a_ij`.
    pub kmat: Vec<Vec<Q>>,
    d: Vec<Q>,
}

impl RootSystem {
    pub fn new(cartan: CartanMatrix) -> Self {
        let n = cartan.n();
        let d: Vec<Q> = (0..n).map(|i| cartan.d(i)).collect();
        let kmat = (0..n)
            .map(|i| (0..n).map(|j| &d[i] * q(cartan.a[i][j])).collect())
            .collect();
        Self { cartan, kmat, d }
    }

    pub fn from_exchange(b: &ExchangeMatrix) -> Result<Self, CartanError> {
        Ok(Self::new(exchange_to_cartan(b)?))
    }

    pub fn n(&self) -> usize {
        self.cartan.n()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.cartan.a[i][j]
    }

    pub fn d(&self, i: usize) -> &Q {
        &self.d[i]
    }

    pub fn dinv(&self, i: usize) -> i64 {
        self.cartan.dinv[i]
    }

    pub fn simple(&self, i: usize) -> Root {
        let mut v = vec![0; self.n()];
        v[i] = 1;
        v
    }

    pub fn k_form(&self, u: &[Q], v: &[Q]) -> Q {
        let n = self.n();
        let mut s = Q::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !v[j].is_zero() && !self.kmat[i][j].is_zero() {
                    s += &u[i] * &self.kmat[i][j] * &v[j];
                }
            }
        }
        s
    }

    pub fn k_int(&self, u: &[i64], v: &[i64]) -> Q {
        let n = self.n();
        let mut s = Q::zero();
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..n {
                if v[j] != 0 {
                    s += &self.kmat[i][j] * q(u[i] * v[j]);
                }
            }
        }
        s
    }

    /// `K(alpha_i^vee, v) = sum_j a_ij v_j`.
    pub fn simple_coroot_pairing(&self, i: usize, v: &[i64]) -> i64 {
        (0..self.n()).map(|j| self.a(i, j) * v[j]).sum()
    }

    pub fn reflect_simple_root(&self, i: usize, v: &[i64]) -> Root {
        let c = self.simple_coroot_pairing(i, v);
        let mut out = v.to_vec();
        out[i] -= c;
        out
    }

    pub fn reflect_simple_root_q(&self, i: usize, v: &[Q]) -> Vec<Q> {
        let c: Q = (0..self.n()).map(|j| q(self.a(i, j)) * &v[j]).sum();
        let mut out = v.to_vec();
        out[i] -= c;
        out
    }

    /// Dual action on weights: `s_i(x)_m = x_m - a_mi x_i`.
    pub fn reflect_simple_weight(&self, i: usize, x: &[Q]) -> Vec<Q> {
        let xi = x[i].clone();
        (0..self.n()).map(|m| &x[m] - q(self.a(m, i)) * &xi).collect()
    }

    /// `K(beta^vee, v)` for a real root `beta`.
    pub fn coroot_pairing(&self, beta: &[i64], v: &[i64]) -> Result<Q, CartanError> {
        let kbb = self.k_int(beta, beta);
        if !kbb.is_positive() {
            return Err(CartanError::NotRealRoot);
        }
        Ok(q(2) * self.k_int(beta, v) / kbb)
    }

    /// `t_beta(v) = v - K(beta^vee, v) beta`.
    pub fn reflect_root(&self, beta: &[i64], v: &[i64]) -> Result<Root, CartanError> {
        let c = self.coroot_pairing(beta, v)?;
        let c = crate::rational::to_i64(&c).ok_or(CartanError::NotRealRoot)?;
        Ok(v.iter().zip(beta).map(|(x, b)| x - c * b).collect())
    }

    /// `t_beta(x) = x - <x, beta> K(beta^vee, .)` on weights.
    pub fn reflect_weight(&self, beta: &[i64], x: &[Q]) -> Result<Vec<Q>, CartanError> {
        let kbb = self.k_int(beta, beta);
        if !kbb.is_positive() {
            return Err(CartanError::NotRealRoot);
        }
        let xb = self.pair(x, beta);
        Ok((0..self.n())
            .map(|m| {
                let coeff = q(2) * self.k_int(beta, &self.simple(m)) / &kbb * q(self.dinv(m));
                &x[m] - &xb * coeff
            })
            .collect())
    }

    /// `<x, beta>` for a weight in rho-coordinates and an integer root-lattice vector.
    pub fn pair(&self, x: &[Q], beta: &[i64]) -> Q {
        let mut s = Q::zero();
        for j in 0..self.n() {
            if beta[j] != 0 && !x[j].is_zero() {
                s += &x[j] * &self.d[j] * q(beta[j]);
            }
        }
        s
    }

    pub fn pair_q(&self, x: &[Q], v: &[Q]) -> Q {
        (0..self.n()).map(|j| &x[j] * &self.d[j] * &v[j]).sum()
    }

    /// Coordinates `f_j = <x, alpha_j>`, in which pairing with roots is the dot product.
    pub fn weight_to_dual(&self, x: &[Q]) -> Vec<Q> {
        (0..self.n()).map(|j| &x[j] * &self.d[j]).collect()
    }

    pub fn dual_to_weight(&self, f: &[Q]) -> Vec<Q> {
        (0..self.n()).map(|j| &f[j] * q(self.dinv(j))).collect()
    }

    /// Primitive element of the coroot lattice on the ray through `beta`, as coefficients
    /// on the simple coroots. For real roots this is `beta^vee`.
    pub fn primitive_coroot(&self, beta: &[i64]) -> Vec<i64> {
        let coords: Vec<Q> = (0..self.n()).map(|i| q(beta[i]) * &self.d[i]).collect();
        primitive(&coords)
    }

    pub fn classify(&self) -> CartanType {
        classify(&self.cartan, &self.kmat)
    }

    /// Decides whether `beta` is a real root by descending to a simple root.
    pub fn is_real_root(&self, beta: &[i64]) -> bool {
        if beta.iter().all(|&x| x <= 0) {
            let neg: Root = beta.iter().map(|x| -x).collect();
            return self.reduce_to_simple(&neg).is_some();
        }
        self.reduce_to_simple(beta).is_some()
    }

    /// For a positive real root, returns `(word, i)` with `beta = s_{w_1} ... s_{w_k} alpha_i`
    /// and heights strictly increasing along the word read right to left.
    pub fn reduce_to_simple(&self, beta: &[i64]) -> Option<(Vec<usize>, usize)> {
        if beta.iter().any(|&x| x < 0) || beta.iter().all(|&x| x == 0) {
            return None;
        }
        let mut cur = beta.to_vec();
        let mut word = Vec::new();
        loop {
            if height(&cur) == 1 {
                let i = cur.iter().position(|&x| x == 1).unwrap();
                return Some((word, i));
            }
            let i = (0..self.n()).find(|&i| cur[i] > 0 && self.simple_coroot_pairing(i, &cur) > 0)?;
            cur = self.reflect_simple_root(i, &cur);
            if cur.iter().any(|&x| x < 0) {
                return None;
            }
            word.push(i);
        }
    }

    /// All positive real roots of height at most `h`, sorted by height then coordinates.
    pub fn real_roots_up_to_height(&self, h: i64) -> Vec<Root> {
        let n = self.n();
        let mut seen: HashSet<Root> = HashSet::new();
        let mut queue: VecDeque<Root> = VecDeque::new();
        if h >= 1 {
            for i in 0..n {
                let s = self.simple(i);
                seen.insert(s.clone());
                queue.push_back(s);
            }
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                let c = self.simple_coroot_pairing(i, &beta);
                if c < 0 {
                    let next = self.reflect_simple_root(i, &beta);
                    if height(&next) <= h && !seen.contains(&next) {
                        seen.insert(next.clone());
                        queue.push_back(next);
                    }
                }
            }
        }
        let mut out: Vec<Root> = seen.into_iter().collect();
        sort_roots(&mut out);
        out
    }
}

pub fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}

pub fn sort_roots(v: &mut [Root]) {
    v.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
}

pub fn is_nonneg(v: &[i64]) -> bool {
    v.iter().all(|&x| x >= 0)
}

pub fn is_positive_root_vec(v: &[i64]) -> bool {
    is_nonneg(v) && v.iter().any(|&x| x > 0)
}

pub fn neg(v: &[i64]) -> Root {
    v.iter().map(|x| -x).collect()
}

fn principal(k: &[Vec<Q>], idx: &[usize]) -> Vec<Vec<Q>> {
    idx.iter().map(|&i| idx.iter().map(|&j| k[i][j].clone()).collect()).collect()
}

fn positive_definite(k: &[Vec<Q>], idx: &[usize]) -> bool {
    (1..=idx.len()).all(|m| det(&principal(k, &idx[..m])).is_positive())
}

fn classify(cartan: &CartanMatrix, kmat: &[Vec<Q>]) -> CartanType {
    let n = cartan.n();
    let all: Vec<usize> = (0..n).collect();
    if positive_definite(kmat, &all) {
        return CartanType::Finite;
    }
    let minus = |i: usize| -> Vec<usize> { (0..n).filter(|&j| j != i).collect() };
    if n < 2 || !det(kmat).is_zero() || !(0..n).all(|i| positive_definite(kmat, &minus(i))) {
        return CartanType::Indefinite;
    }
    let rows: Vec<Vec<Q>> = cartan.a.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let ker = kernel(&rows, n);
    if ker.len() != 1 {
        return CartanType::Indefinite;
    }
    let mut delta = primitive(&ker[0]);
    if delta.iter().any(|&x| x < 0) {
        delta = neg(&delta);
    }
    if delta.iter().any(|&x| x <= 0) {
        return CartanType::Indefinite;
    }
    // Null coroot: delta expanded on simple coroots, made primitive.
    let null_coroot = primitive(&(0..n).map(|i| q(delta[i]) * cartan.d(i)).collect::<Vec<_>>());
    let aff_index = (0..n)
        .find(|&i| null_coroot[i] == 1)
        .expect("affine matrix without a special node");
    let label = dynkin::affine_label(&cartan.a).unwrap_or_else(|| "unknown".into());
    let is_a2k2 = label.starts_with('A') && label.ends_with("^(2)") && {
        let m: usize = label[2..label.len() - 4].parse().unwrap_or(1);
        m.is_even()
    };
    CartanType::Affine(AffineTypeInfo { label, delta, aff_index, is_a2k2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    fn rs(b: Vec<Vec<i64>>) -> RootSystem {
        RootSystem::from_exchange(&ExchangeMatrix::new(b).unwrap()).unwrap()
    }

    #[test]
    fn symmetrizers() {
        let r = rs(vec![vec![0, 2], vec![-2, 0]]);
        assert_eq!(r.cartan.a, vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(r.cartan.dinv, vec![1, 1]);
        let r = rs(vec![vec![0, 1], vec![-4, 0]]);
        assert_eq!(r.cartan.a, vec![vec![2, -1], vec![-4, 2]]);
        assert_eq!(r.cartan.dinv, vec![1, 4]);
        assert_eq!(r.d(1), &q_frac(1, 4));
        // d_1 b_12 = -d_2 b_21
        assert_eq!(r.d(0) * q(1), -(r.d(1) * q(-4)));
        let r = rs(vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]]);
        assert_eq!(r.cartan.dinv, vec![1, 1, 1]);
        assert!(r.cartan.a.iter().enumerate().all(|(i, row)| row
            .iter()
            .enumerate()
            .all(|(j, &x)| x == if i == j { 2 } else { -1 })));
    }

    #[test]
    fn rejects_non_symmetrizable() {
        assert!(ExchangeMatrix::new(vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(ExchangeMatrix::new(vec![vec![0, 1, 0], vec![-1, 0, 0]]).is_err());
        // cyclic product condition violated
        assert!(ExchangeMatrix::new(vec![vec![0, 1, -1], vec![-2, 0, 1], vec![1, -1, 0]]).is_err());
    }

    #[test]
    fn classification() {
        let r = rs(vec![vec![0, 2], vec![-2, 0]]);
        match r.classify() {
            CartanType::Affine(info) => {
                assert_eq!(info.label, "A_1^(1)");
                assert_eq!(info.delta, vec![1, 1]);
                assert!(!info.is_a2k2);
                assert_eq!(info.aff_index, 0);
            }
            other => panic!("{other:?}"),
        }
        let r = rs(vec![vec![0, 1], vec![-4, 0]]);
        match r.classify() {
            CartanType::Affine(info) => {
                assert_eq!(info.label, "A_2^(2)");
                assert_eq!(info.delta, vec![1, 2]);
                assert!(info.is_a2k2);
                assert_eq!(info.aff_index, 1);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(rs(vec![vec![0, 1], vec![-1, 0]]).classify(), CartanType::Finite);
        assert_eq!(rs(vec![vec![0, 3], vec![-3, 0]]).classify(), CartanType::Indefinite);
        match rs(vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]]).classify() {
            CartanType::Affine(info) => {
                assert_eq!(info.label, "A_2^(1)");
                assert_eq!(info.delta, vec![1, 1, 1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn every_table_entry_classifies_as_affine_with_its_label() {
        for n in 2..=9 {
            for (label, a) in dynkin::affine_table(n) {
                let dinv = {
                    let b: Vec<Vec<i64>> = (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| match i.cmp(&j) {
                                    std::cmp::Ordering::Less => -a[i][j],
                                    std::cmp::Ordering::Greater => a[i][j],
                                    _ => 0,
                                })
                                .collect()
                        })
                        .collect();
                    exchange_to_cartan(&ExchangeMatrix::new(b).unwrap()).unwrap().dinv
                };
                let r = RootSystem::new(CartanMatrix { a: a.clone(), dinv });
                match r.classify() {
                    CartanType::Affine(info) => {
                        assert_eq!(info.label, label);
                        let rest: Vec<usize> = (0..n).filter(|&i| i != info.aff_index).collect();
                        assert!(positive_definite(&r.kmat, &rest));
                        assert_eq!(info.is_a2k2, label.starts_with("A_") && label.ends_with("^(2)") && {
                            let m: usize = label[2..label.len() - 4].parse().unwrap();
                            m % 2 == 0
                        });
                    }
                    other => panic!("{label}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn reflections() {
        let r = rs(vec![vec![0, 2], vec![-2, 0]]);
        assert_eq!(r.reflect_simple_weight(0, &[q(1), q(0)]), vec![q(-1), q(2)]);
        assert_eq!(r.reflect_simple_root(0, &[0, 1]), vec![2, 1]);
        let beta = vec![2, 1];
        assert_eq!(r.reflect_root(&beta, &beta).unwrap(), vec![-2, -1]);
        assert_eq!(r.reflect_root(&[1, 1], &[1, 0]), Err(CartanError::NotRealRoot));
        for i in 0..2 {
            assert_eq!(r.reflect_simple_root(i, &[1, 1]), vec![1, 1]);
        }
    }

    #[test]
    fn weight_reflection_matches_simple_formula() {
        let r = rs(vec![vec![0, 1], vec![-4, 0]]);
        let x = vec![q(3), q_frac(-1, 2)];
        for i in 0..2 {
            assert_eq!(r.reflect_weight(&r.simple(i), &x).unwrap(), r.reflect_simple_weight(i, &x));
        }
    }

    #[test]
    fn real_roots() {
        let r = rs(vec![vec![0, 2], vec![-2, 0]]);
        assert_eq!(r.real_roots_up_to_height(3), vec![vec![1, 0], vec![0, 1], vec![2, 1], vec![1, 2]]);
        assert_eq!(r.real_roots_up_to_height(1), vec![vec![1, 0], vec![0, 1]]);
        for b in r.real_roots_up_to_height(3) {
            assert!(r.k_int(&b, &b).is_positive());
        }
        let a2 = rs(vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(a2.real_roots_up_to_height(2), vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert!(r.is_real_root(&[3, 2]));
        assert!(!r.is_real_root(&[1, 1]));
        assert!(!r.is_real_root(&[2, 0]));
        assert!(r.is_real_root(&[-1, -2]));
    }

    #[test]
    fn primitive_coroots() {
        let r = rs(vec![vec![0, 1], vec![-4, 0]]);
        // delta = alpha_1 + 2 alpha_2 = alpha_1^vee + 1/2 alpha_2^vee
        assert_eq!(r.primitive_coroot(&[1, 2]), vec![2, 1]);
        assert_eq!(r.primitive_coroot(&[0, 1]), vec![0, 1]);
    }
}
