//! Coxeter elements of acyclic exchange matrices and the forms `omega_c`, `E_c`, the map
//! `nu_c`, and the affine vectors `gamma_c`, `x_c`.

use num_traits::{Signed, Zero};

use crate::cartan::{AffineTypeInfo, ExchangeMatrix, Root, RootSystem};
use crate::rational::{q, qvec, solve, Q};

/// A Coxeter element stored as a linear order of the simple reflections; the word
/// `s_{order[0]} s_{order[1]} ...` acts on the right first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoxeterElement {
    pub order: Vec<usize>,
    pos: Vec<usize>,
}

impl CoxeterElement {
    pub fn new(order: Vec<usize>) -> Self {
        let n = order.len();
        let mut pos = vec![usize::MAX; n];
        for (p, &i) in order.iter().enumerate() {
            assert!(i < n && pos[i] == usize::MAX, "order must be a permutation");
            pos[i] = p;
        }
        Self { order, pos }
    }

    /// The Coxeter element of an acyclic exchange matrix: `s_i` precedes `s_j` if `b_ij > 0`.
    pub fn from_exchange(b: &ExchangeMatrix) -> Option<Self> {
        b.acyclic_order().map(Self::new)
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.order
    }

    pub fn pos(&self, i: usize) -> usize {
        self.pos[i]
    }

    pub fn inverse(&self) -> Self {
        let mut o = self.order.clone();
        o.reverse();
        Self::new(o)
    }

    /// `s` can start some reduced word of `c`.
    pub fn is_initial(&self, rs: &RootSystem, s: usize) -> bool {
        self.order[..self.pos[s]].iter().all(|&t| rs.a(s, t) == 0)
    }

    pub fn is_final(&self, rs: &RootSystem, s: usize) -> bool {
        self.order[self.pos[s] + 1..].iter().all(|&t| rs.a(s, t) == 0)
    }

    /// `s c s` for `s` initial or final, realised by rotating `s` to the other end.
    pub fn conjugate(&self, rs: &RootSystem, s: usize) -> Self {
        let rest: Vec<usize> = self.order.iter().copied().filter(|&t| t != s).collect();
        let order = if self.is_initial(rs, s) {
            rest.into_iter().chain(std::iter::once(s)).collect()
        } else {
            assert!(self.is_final(rs, s), "s must be initial or final");
            std::iter::once(s).chain(rest).collect()
        };
        Self::new(order)
    }

    /// `c(v)` on root coordinates.
    pub fn act_root(&self, rs: &RootSystem, v: &[i64]) -> Root {
        self.order.iter().rev().fold(v.to_vec(), |acc, &i| rs.reflect_simple_root(i, &acc))
    }

    pub fn act_root_inv(&self, rs: &RootSystem, v: &[i64]) -> Root {
        self.order.iter().fold(v.to_vec(), |acc, &i| rs.reflect_simple_root(i, &acc))
    }

    pub fn act_root_q(&self, rs: &RootSystem, v: &[Q]) -> Vec<Q> {
        self.order.iter().rev().fold(v.to_vec(), |acc, &i| rs.reflect_simple_root_q(i, &acc))
    }

    pub fn act_weight(&self, rs: &RootSystem, x: &[Q]) -> Vec<Q> {
        self.order.iter().rev().fold(x.to_vec(), |acc, &i| rs.reflect_simple_weight(i, &acc))
    }

    /// `omega_c(alpha_i^vee, alpha_j)`.
    pub fn omega_table(&self, rs: &RootSystem, i: usize, j: usize) -> i64 {
        use std::cmp::Ordering::*;
        match self.pos[i].cmp(&self.pos[j]) {
            Greater => rs.a(i, j),
            Equal => 0,
            Less => -rs.a(i, j),
        }
    }

    /// `E_c(alpha_i^vee, alpha_j)`.
    pub fn e_table(&self, rs: &RootSystem, i: usize, j: usize) -> i64 {
        use std::cmp::Ordering::*;
        match self.pos[i].cmp(&self.pos[j]) {
            Greater => rs.a(i, j),
            Equal => 1,
            Less => 0,
        }
    }

    /// `omega_c(x, y)` for vectors of V in root coordinates.
    pub fn omega(&self, rs: &RootSystem, x: &[Q], y: &[Q]) -> Q {
        self.bilinear(rs, x, y, |i, j| self.omega_table(rs, i, j))
    }

    pub fn e_form(&self, rs: &RootSystem, x: &[Q], y: &[Q]) -> Q {
        self.bilinear(rs, x, y, |i, j| self.e_table(rs, i, j))
    }

    pub fn omega_int(&self, rs: &RootSystem, x: &[i64], y: &[i64]) -> Q {
        self.omega(rs, &qvec(x), &qvec(y))
    }

    fn bilinear(&self, rs: &RootSystem, x: &[Q], y: &[Q], t: impl Fn(usize, usize) -> i64) -> Q {
        let n = self.n();
        let mut s = Q::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            let xi = &x[i] * rs.d(i);
            for j in 0..n {
                let tij = t(i, j);
                if tij != 0 && !y[j].is_zero() {
                    s += &xi * q(tij) * &y[j];
                }
            }
        }
        s
    }

    /// `omega_c(alpha_i^vee, y)`.
    pub fn omega_coroot(&self, rs: &RootSystem, i: usize, y: &[Q]) -> Q {
        (0..self.n()).map(|j| q(self.omega_table(rs, i, j)) * &y[j]).sum()
    }

    pub fn e_coroot(&self, rs: &RootSystem, i: usize, y: &[Q]) -> Q {
        (0..self.n()).map(|j| q(self.e_table(rs, i, j)) * &y[j]).sum()
    }

    /// The weight `omega_c(., y)`, i.e. coefficients `omega_c(alpha_i^vee, y)`.
    pub fn omega_weight(&self, rs: &RootSystem, y: &[Q]) -> Vec<Q> {
        (0..self.n()).map(|i| self.omega_coroot(rs, i, y)).collect()
    }

    /// The piecewise-linear map from V to V*: the negative part of `beta` goes to the matching
    /// fundamental weights, and `-E_c(., beta_+)` is added in every coordinate. Dropping the
    /// second term on the negative coordinates would break continuity across the walls
    /// `beta_i = 0` (in affine A_1, `(1, -2)` and `(1, 0)` would collide).
    pub fn nu(&self, rs: &RootSystem, beta: &[Q]) -> Vec<Q> {
        let plus: Vec<Q> = beta.iter().map(|x| if x.is_negative() { Q::zero() } else { x.clone() }).collect();
        (0..self.n())
            .map(|i| {
                let e = -self.e_coroot(rs, i, &plus);
                if beta[i].is_negative() {
                    e - &beta[i]
                } else {
                    e
                }
            })
            .collect()
    }

    pub fn nu_int(&self, rs: &RootSystem, beta: &[i64]) -> Vec<Q> {
        self.nu(rs, &qvec(beta))
    }
}

/// `gamma_c`, `x_c` and the functional `K(gamma_c, .)` cutting out the tube hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineVectors {
    pub gamma_c: Vec<Q>,
    pub x_c: Vec<Q>,
    /// `K(gamma_c, alpha_j)` for each `j`.
    pub h_c: Vec<Q>,
}

impl AffineVectors {
    pub fn h_value(&self, v: &[i64]) -> Q {
        crate::rational::dot_qi(&self.h_c, v)
    }
}

pub fn affine_vectors(rs: &RootSystem, c: &CoxeterElement, info: &AffineTypeInfo) -> AffineVectors {
    affine_vectors_at(rs, c, &info.delta, info.aff_index)
}

/// As [`affine_vectors`] with an explicit choice of the affine node.
pub fn affine_vectors_at(rs: &RootSystem, c: &CoxeterElement, delta: &[i64], aff: usize) -> AffineVectors {
    let n = rs.n();
    let cols: Vec<usize> = (0..n).filter(|&j| j != aff).collect();
    let images: Vec<Root> = cols
        .iter()
        .map(|&j| {
            let mut v = c.act_root(rs, &rs.simple(j));
            v[j] -= 1;
            v
        })
        .collect();
    let rows: Vec<Vec<Q>> = (0..n).map(|i| images.iter().map(|v| q(v[i])).collect()).collect();
    let sol = solve(&rows, &qvec(delta)).expect("(c - 1) gamma = delta has no solution");
    let mut gamma_c = vec![Q::zero(); n];
    for (k, &j) in cols.iter().enumerate() {
        gamma_c[j] = sol[k].clone();
    }
    let dq = qvec(delta);
    let x_c = (0..n).map(|i| -c.omega_coroot(rs, i, &dq)).collect();
    let h_c = (0..n).map(|j| rs.k_form(&gamma_c, &qvec(&rs.simple(j)))).collect();
    AffineVectors { gamma_c, x_c, h_c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanType;
    use crate::rational::q_frac;

    fn setup(b: Vec<Vec<i64>>) -> (RootSystem, CoxeterElement) {
        let b = ExchangeMatrix::new(b).unwrap();
        (RootSystem::from_exchange(&b).unwrap(), CoxeterElement::from_exchange(&b).unwrap())
    }

    fn simple_q(n: usize, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); n];
        v[i] = q(1);
        v
    }

    #[test]
    fn coxeter_order_respects_signs() {
        let (_, c) = setup(vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]]);
        assert_eq!(c.order, vec![0, 1, 2]);
        let (_, c) = setup(vec![vec![0, -1], vec![1, 0]]);
        assert_eq!(c.order, vec![1, 0]);
        let cyc = ExchangeMatrix::new(vec![vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]).unwrap();
        assert!(CoxeterElement::from_exchange(&cyc).is_none());
    }

    #[test]
    fn forms_in_affine_a1() {
        let (rs, c) = setup(vec![vec![0, 2], vec![-2, 0]]);
        let (a1, a2) = (simple_q(2, 0), simple_q(2, 1));
        let delta = qvec(&[1, 1]);
        assert_eq!(c.omega_coroot(&rs, 0, &a2), q(2));
        assert_eq!(c.omega_coroot(&rs, 0, &delta), q(2));
        assert_eq!(c.e_coroot(&rs, 1, &a1), q(-2));
        assert_eq!(c.e_coroot(&rs, 0, &a2), q(0));
        assert_eq!(c.e_coroot(&rs, 0, &a1), q(1));
        assert_eq!(c.omega(&rs, &delta, &delta), q(0));
    }

    #[test]
    fn omega_c_matches_exchange_matrix_and_k_splits() {
        for b in [
            vec![vec![0, 2], vec![-2, 0]],
            vec![vec![0, 1], vec![-4, 0]],
            vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]],
            vec![vec![0, -1, 0], vec![1, 0, -2], vec![0, 1, 0]],
        ] {
            let (rs, c) = setup(b.clone());
            let n = rs.n();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(c.omega_table(&rs, i, j), b[i][j]);
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = (simple_q(n, i), simple_q(n, j));
                    assert_eq!(c.omega(&rs, &x, &y), c.e_form(&rs, &x, &y) - c.e_form(&rs, &y, &x));
                    assert_eq!(rs.k_form(&x, &y), c.e_form(&rs, &x, &y) + c.e_form(&rs, &y, &x));
                }
            }
        }
    }

    #[test]
    fn nu_values() {
        let (rs, c) = setup(vec![vec![0, 2], vec![-2, 0]]);
        assert_eq!(c.nu_int(&rs, &[-1, 0]), vec![q(1), q(0)]);
        assert_eq!(c.nu_int(&rs, &[0, -1]), vec![q(0), q(1)]);
        assert_eq!(c.nu_int(&rs, &[1, 1]), vec![q(-1), q(1)]);
        assert_eq!(c.nu_int(&rs, &[1, 0]), vec![q(-1), q(2)]);
    }

    #[test]
    fn affine_vectors_in_affine_a1() {
        let (rs, c) = setup(vec![vec![0, 2], vec![-2, 0]]);
        let v = affine_vectors_at(&rs, &c, &[1, 1], 1);
        assert_eq!(v.gamma_c, vec![q_frac(1, 2), q(0)]);
        assert_eq!(v.x_c, vec![q(-2), q(2)]);
        let CartanType::Affine(info) = rs.classify() else { panic!() };
        let w = affine_vectors(&rs, &c, &info);
        assert_eq!(w.gamma_c, vec![q(0), q_frac(-1, 2)]);
        // the tube hyperplane does not depend on the affine node
        assert_eq!(w.h_c, v.h_c);
        let nu_delta = c.nu_int(&rs, &[1, 1]);
        assert_eq!(nu_delta.iter().map(|x| x * q(2)).collect::<Vec<_>>(), v.x_c);
    }

    #[test]
    fn gamma_solves_the_defining_equation() {
        for b in [
            vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]],
            vec![vec![0, 1], vec![-4, 0]],
            vec![vec![0, 2, 0], vec![-1, 0, 1], vec![0, -2, 0]],
        ] {
            let (rs, c) = setup(b);
            let CartanType::Affine(info) = rs.classify() else { panic!() };
            let v = affine_vectors(&rs, &c, &info);
            let cg = c.act_root_q(&rs, &v.gamma_c);
            let diff: Vec<Q> = cg.iter().zip(&v.gamma_c).map(|(a, b)| a - b).collect();
            assert_eq!(diff, qvec(&info.delta));
            assert!(v.gamma_c[info.aff_index].is_zero());
            assert!(rs.pair(&v.x_c, &info.delta).is_zero());
        }
    }
}
