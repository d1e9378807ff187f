//! Rational polyhedral cones in V* cut out by root-lattice functionals.
//!
//! Points are given in dual coordinates `f_j = <x, alpha_j>`, so the pairing with a root is a
//! plain dot product. Generators are computed by the double-description method and brought
//! to a canonical form, which decides cone equality exactly.

use num_traits::{Signed, Zero};

use crate::cartan::Root;
use crate::rational::{dot, dot_qi, primitive, q, rref, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    pub n: usize,
    /// `<x, phi> = 0`.
    pub eqs: Vec<Root>,
    /// `<x, phi> <= 0`.
    pub ineqs: Vec<Root>,
}

/// Canonical generators: a reduced row-echelon basis of the lineality space and primitive
/// integer rays reduced modulo it, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generators {
    pub lines: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Q>>,
}

impl Generators {
    pub fn dim(&self) -> usize {
        let mut all = self.lines.clone();
        all.extend(self.rays.iter().cloned());
        crate::rational::rank(&all)
    }

    pub fn is_pointed(&self) -> bool {
        self.lines.is_empty()
    }
}

fn to_primitive_q(v: &[Q]) -> Vec<Q> {
    primitive(v).into_iter().map(q).collect()
}

fn scale_sub(a: &[Q], c: &Q, b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - c * y).collect()
}

/// Double description: generators of `{x : a.x <= 0 for a in constraints}` in `R^n`.
fn double_description(n: usize, constraints: &[Root]) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let mut lines: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect())
        .collect();
    let mut rays: Vec<Vec<Q>> = Vec::new();
    for (k, a) in constraints.iter().enumerate() {
        if a.iter().all(|&x| x == 0) {
            continue;
        }
        if let Some(li) = lines.iter().position(|l| !dot_qi(l, a).is_zero()) {
            let mut l0 = lines.remove(li);
            let mut al0 = dot_qi(&l0, a);
            if al0.is_positive() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            lines = lines
                .iter()
                .map(|l| {
                    let c = dot_qi(l, a) / &al0;
                    scale_sub(l, &c, &l0)
                })
                .collect();
            rays = rays
                .iter()
                .map(|r| {
                    let c = dot_qi(r, a) / &al0;
                    to_primitive_q(&scale_sub(r, &c, &l0))
                })
                .filter(|r| r.iter().any(|x| !x.is_zero()))
                .collect();
            rays.push(to_primitive_q(&l0));
            rays.sort();
            rays.dedup();
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| dot_qi(r, a)).collect();
        let tight = |r: &[Q]| -> Vec<bool> { constraints[..k].iter().map(|c| dot_qi(r, c).is_zero()).collect() };
        let zsets: Vec<Vec<bool>> = rays.iter().map(|r| tight(r)).collect();
        let mut next: Vec<Vec<Q>> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_positive() {
                next.push(r.clone());
            }
        }
        for p in 0..rays.len() {
            if !vals[p].is_positive() {
                continue;
            }
            for m in 0..rays.len() {
                if !vals[m].is_negative() {
                    continue;
                }
                let common: Vec<bool> = zsets[p].iter().zip(&zsets[m]).map(|(x, y)| *x && *y).collect();
                let adjacent = (0..rays.len()).all(|r| {
                    r == p || r == m || !common.iter().zip(&zsets[r]).all(|(c, z)| !*c || *z)
                });
                if adjacent {
                    let v: Vec<Q> = rays[m]
                        .iter()
                        .zip(&rays[p])
                        .map(|(y, x)| &vals[p] * y - &vals[m] * x)
                        .collect();
                    if v.iter().any(|x| !x.is_zero()) {
                        next.push(to_primitive_q(&v));
                    }
                }
            }
        }
        next.sort();
        next.dedup();
        rays = next;
    }
    // Keep only extreme rays: tight constraints of rank n - dim(lineality) - 1.
    if lines.len() == n {
        return (lines, vec![]);
    }
    let target = n - lines.len() - 1;
    let rays = rays
        .into_iter()
        .filter(|r| {
            let tight: Vec<Vec<Q>> = constraints
                .iter()
                .filter(|c| dot_qi(r, c).is_zero())
                .map(|c| c.iter().map(|&x| q(x)).collect())
                .collect();
            crate::rational::rank(&tight) == target
        })
        .collect();
    (lines, rays)
}

impl Cone {
    pub fn new(n: usize, eqs: Vec<Root>, ineqs: Vec<Root>) -> Self {
        Self { n, eqs, ineqs }
    }

    pub fn full(n: usize) -> Self {
        Self::new(n, vec![], vec![])
    }

    /// `{x : <x, beta> = 0}`.
    pub fn hyperplane(beta: &[i64]) -> Self {
        Self::new(beta.len(), vec![beta.to_vec()], vec![])
    }

    /// `{x : <x, beta> >= 0 for all beta}`.
    pub fn from_nonneg(n: usize, normals: &[Root]) -> Self {
        Self::new(n, vec![], normals.iter().map(|b| crate::cartan::neg(b)).collect())
    }

    /// The cone spanned by `rays` (rational vectors in dual coordinates).
    pub fn from_generators(n: usize, rays: &[Vec<Q>]) -> Self {
        let dual = Cone::new(n, vec![], rays.iter().map(|r| primitive(r)).collect());
        let g = dual.generators();
        Cone::new(n, g.lines.iter().map(|l| primitive(l)).collect(), g.rays.iter().map(|r| primitive(r)).collect())
    }

    fn all_constraints(&self) -> Vec<Root> {
        let mut c = Vec::with_capacity(2 * self.eqs.len() + self.ineqs.len());
        for e in &self.eqs {
            c.push(e.clone());
            c.push(crate::cartan::neg(e));
        }
        c.extend(self.ineqs.iter().cloned());
        c
    }

    pub fn contains(&self, f: &[Q]) -> bool {
        self.eqs.iter().all(|e| dot_qi(f, e).is_zero()) && self.ineqs.iter().all(|a| !dot_qi(f, a).is_positive())
    }

    pub fn generators(&self) -> Generators {
        let (lines, rays) = double_description(self.n, &self.all_constraints());
        let mut lm = lines;
        let piv = rref(&mut lm);
        lm.truncate(piv.len());
        let mut rays: Vec<Vec<Q>> = rays
            .into_iter()
            .map(|mut r| {
                for (row, &p) in lm.iter().zip(&piv) {
                    let c = r[p].clone();
                    if !c.is_zero() {
                        r = scale_sub(&r, &c, row);
                    }
                }
                r
            })
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|r| to_primitive_q(&r))
            .collect();
        rays.sort();
        rays.dedup();
        Generators { lines: lm, rays }
    }

    pub fn dim(&self) -> usize {
        self.generators().dim()
    }

    pub fn same_set(&self, other: &Cone) -> bool {
        self.generators() == other.generators()
    }

    pub fn negated(&self) -> Cone {
        Cone::new(self.n, self.eqs.clone(), self.ineqs.iter().map(|a| crate::cartan::neg(a)).collect())
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        Cone::new(self.n, eqs, ineqs)
    }

    pub fn with_ineq(&self, phi: Root) -> Cone {
        let mut c = self.clone();
        c.ineqs.push(phi);
        c
    }

    pub fn with_eq(&self, phi: Root) -> Cone {
        let mut c = self.clone();
        c.eqs.push(phi);
        c
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        let g = self.generators();
        g.rays.iter().all(|r| other.contains(r))
            && g.lines.iter().all(|l| other.contains(l) && other.contains(&l.iter().map(|x| -x).collect::<Vec<_>>()))
    }

    /// Whether `f` lies in the relative interior.
    pub fn relint_contains(&self, f: &[Q]) -> bool {
        if !self.contains(f) {
            return false;
        }
        let g = self.generators();
        self.ineqs.iter().all(|a| {
            let implicit = g.rays.iter().all(|r| dot_qi(r, a).is_zero());
            implicit || dot_qi(f, a).is_negative()
        })
    }

    /// A point in the relative interior (sum of the extreme rays).
    pub fn relint_point(&self) -> Vec<Q> {
        let g = self.generators();
        let mut p = vec![Q::zero(); self.n];
        for r in &g.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += y;
            }
        }
        p
    }

    /// Constraints that hold with equality on the whole cone.
    pub fn implicit_equalities(&self) -> Vec<Root> {
        let g = self.generators();
        let mut out = self.eqs.clone();
        for a in &self.ineqs {
            if g.rays.iter().all(|r| dot_qi(r, a).is_zero()) {
                out.push(a.clone());
            }
        }
        out
    }
}

/// Exact interior-disjointness check for two full-dimensional cones.
pub fn interiors_disjoint(a: &Cone, b: &Cone) -> bool {
    a.intersect(b).dim() < a.n
}

pub fn dot_q(a: &[Q], b: &[Q]) -> Q {
    dot(a, b)
}
