//! The affine almost-positive roots model: tube data, `AP_c`, the maps `sigma_s` and `tau_c`,
//! the compatibility degree, clusters and their image under `nu_c`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::{height, is_nonneg, neg, AffineTypeInfo, Root, RootSystem};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::forms::{affine_vectors, AffineVectors, CoxeterElement};
use crate::rational::{qvec, rank, Q};
use crate::weyl::GroupElement;

/// Positive roots of the finite root system spanned by the simples other than `aff`.
pub fn finite_positive_roots(rs: &RootSystem, aff: usize) -> Vec<Root> {
    let mut seen: BTreeSet<Root> = (0..rs.n()).filter(|&i| i != aff).map(|i| rs.simple(i)).collect();
    let mut stack: Vec<Root> = seen.iter().cloned().collect();
    while let Some(b) = stack.pop() {
        for i in (0..rs.n()).filter(|&i| i != aff) {
            let r = rs.reflect_simple_root(i, &b);
            if is_nonneg(&r) && !seen.contains(&r) {
                seen.insert(r.clone());
                stack.push(r);
            }
        }
    }
    let mut out: Vec<Root> = seen.into_iter().collect();
    crate::cartan::sort_roots(&mut out);
    out
}

#[derive(Debug, Clone)]
pub struct TubeStructure {
    pub info: AffineTypeInfo,
    pub vectors: AffineVectors,
    /// Positive roots of the finite root system lying in the tube hyperplane.
    pub phi_t_fin: Vec<Root>,
    /// Minimal generators of the positive tube roots.
    pub xi: Vec<Root>,
    /// Each cycle lists indices into `xi` in the order `xi, c xi, c^2 xi, ...`.
    pub cycles: Vec<Vec<usize>>,
    /// Real roots of `APT_c`.
    pub apt_re: BTreeSet<Root>,
}

impl TubeStructure {
    pub fn delta(&self) -> &Root {
        &self.info.delta
    }

    pub fn in_tube_hyperplane(&self, v: &[i64]) -> bool {
        self.vectors.h_value(v).is_zero()
    }

    /// Indices of `xi` in the support of a real tube root, if it is an arc of one cycle.
    pub fn support(&self, beta: &[i64]) -> Option<BTreeSet<usize>> {
        for cyc in &self.cycles {
            let m = cyc.len();
            for start in 0..m {
                let mut sum = vec![0; beta.len()];
                for len in 1..m {
                    let idx = cyc[(start + len - 1) % m];
                    for (s, x) in sum.iter_mut().zip(&self.xi[idx]) {
                        *s += x;
                    }
                    if sum == beta {
                        return Some((0..len).map(|l| cyc[(start + l) % m]).collect());
                    }
                }
            }
        }
        None
    }
}

pub fn tube_structure(rs: &RootSystem, c: &CoxeterElement, info: &AffineTypeInfo) -> TubeStructure {
    let vectors = affine_vectors(rs, c, info);
    let delta = info.delta.clone();
    let phi_t_fin: Vec<Root> = finite_positive_roots(rs, info.aff_index)
        .into_iter()
        .filter(|r| vectors.h_value(r).is_zero())
        .collect();
    let mut apt_re = BTreeSet::new();
    for r in &phi_t_fin {
        let mut cur = r.clone();
        loop {
            assert!(is_nonneg(&cur), "tube orbit left the positive roots");
            if !apt_re.insert(cur.clone()) {
                break;
            }
            cur = c.act_root(rs, &cur);
        }
    }
    let in_h = |v: &[i64]| vectors.h_value(v).is_zero();
    let mut xi: Vec<Root> = rs
        // twisted types can have long-root tubes of period up to 3δ
        .real_roots_up_to_height(3 * height(&delta))
        .into_iter()
        .filter(|r| in_h(r))
        .filter(|r| {
            let t = GroupElement::reflection(rs, r).unwrap();
            t.inversions().iter().all(|g| g == r || !in_h(g))
        })
        .collect();
    if xi.is_empty() {
        xi.push(delta.clone());
    }
    let index: BTreeMap<Root, usize> = xi.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let mut cycles = Vec::new();
    let mut done = vec![false; xi.len()];
    for i in 0..xi.len() {
        if done[i] {
            continue;
        }
        let mut cyc = vec![];
        let mut j = i;
        while !done[j] {
            done[j] = true;
            cyc.push(j);
            j = *index.get(&c.act_root(rs, &xi[j])).expect("c does not permute the tube generators");
        }
        assert_eq!(j, i);
        let mut sum = vec![0; rs.n()];
        for &k in &cyc {
            for (s, x) in sum.iter_mut().zip(&xi[k]) {
                *s += x;
            }
        }
        let mult = sum[0] / delta[0];
        assert!(
            mult > 0 && sum.iter().zip(&delta).all(|(s, d)| *s == mult * d),
            "tube cycle does not sum to a multiple of delta"
        );
        cycles.push(cyc);
    }
    let ts = TubeStructure { info: info.clone(), vectors, phi_t_fin, xi, cycles, apt_re };
    if rs.n() >= 3 {
        let rows: Vec<Vec<Q>> = ts.phi_t_fin.iter().map(|r| qvec(r)).collect();
        assert_eq!(rank(&rows), rs.n() - 2, "finite tube roots have the wrong rank");
    }
    for r in &ts.apt_re {
        assert!(ts.support(r).is_some(), "tube root {r:?} is not an arc");
    }
    ts
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ApClass {
    NegSimple(usize),
    RealNonTube,
    TubeReal(BTreeSet<usize>),
    Delta,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ApRoot {
    pub root: Root,
    pub class: ApClass,
}

pub fn classify_ap(ts: &TubeStructure, beta: &[i64]) -> Option<ApClass> {
    if let Some(i) = is_neg_simple(beta) {
        return Some(ApClass::NegSimple(i));
    }
    if beta == ts.delta().as_slice() {
        return Some(ApClass::Delta);
    }
    if ts.apt_re.contains(beta) {
        return Some(ApClass::TubeReal(ts.support(beta).unwrap()));
    }
    if is_nonneg(beta) && !ts.in_tube_hyperplane(beta) {
        return Some(ApClass::RealNonTube);
    }
    None
}

/// `AP_c` with positive real roots restricted to height at most `h`.
pub fn ap_c(rs: &RootSystem, ts: &TubeStructure, h: i64) -> Vec<ApRoot> {
    let mut roots: Vec<Root> = (0..rs.n()).map(|i| neg(&rs.simple(i))).collect();
    roots.extend(rs.real_roots_up_to_height(h).into_iter().filter(|r| !ts.in_tube_hyperplane(r)));
    roots.extend(ts.apt_re.iter().cloned());
    roots.push(ts.delta().clone());
    let mut out: Vec<ApRoot> = roots
        .into_iter()
        .map(|r| {
            let class = classify_ap(ts, &r).unwrap();
            ApRoot { root: r, class }
        })
        .collect();
    out.sort_by(|a, b| (height(&a.root), &a.root).cmp(&(height(&b.root), &b.root)));
    out.dedup();
    out
}

pub fn is_neg_simple(beta: &[i64]) -> Option<usize> {
    let i = beta.iter().position(|&x| x != 0)?;
    (beta[i] == -1 && beta.iter().filter(|&&x| x != 0).count() == 1).then_some(i)
}

pub fn sigma(rs: &RootSystem, s: usize, beta: &[i64]) -> Root {
    match is_neg_simple(beta) {
        Some(i) if i != s => beta.to_vec(),
        _ => rs.reflect_simple_root(s, beta),
    }
}

/// `tau_c = sigma_{s_1} ... sigma_{s_n}`, applying `sigma_{s_n}` first.
pub fn tau(rs: &RootSystem, c: &CoxeterElement, beta: &[i64]) -> Root {
    c.word().iter().rev().fold(beta.to_vec(), |b, &s| sigma(rs, s, &b))
}

pub fn tau_inv(rs: &RootSystem, c: &CoxeterElement, beta: &[i64]) -> Root {
    c.word().iter().fold(beta.to_vec(), |b, &s| sigma(rs, s, &b))
}

/// Coefficients of the coroot of a real root, or of the primitive coroot of `delta`, in the
/// basis of simple coroots.
fn coroot_coeffs(rs: &RootSystem, beta: &[i64]) -> Root {
    if is_nonneg(beta) {
        rs.primitive_coroot(beta)
    } else {
        neg(&rs.primitive_coroot(&neg(beta)))
    }
}

pub struct Compatibility<'a> {
    pub rs: &'a RootSystem,
    pub c: &'a CoxeterElement,
    pub ts: &'a TubeStructure,
    /// Step cap for the `tau_c` search.
    pub cap: usize,
}

impl<'a> Compatibility<'a> {
    pub fn new(rs: &'a RootSystem, c: &'a CoxeterElement, ts: &'a TubeStructure, h: i64) -> Self {
        let cap = 4 * rs.n() * (h.max(0) as usize + 1);
        Self { rs, c, ts, cap }
    }

    fn in_apt(&self, b: &[i64]) -> bool {
        b == self.ts.delta().as_slice() || self.ts.apt_re.contains(b)
    }

    fn tube_degree(&self, a: &[i64], b: &[i64]) -> i64 {
        if a == b {
            return -1;
        }
        let sa = self.ts.support(a).unwrap();
        let sb = self.ts.support(b).unwrap();
        let strict = |x: &BTreeSet<usize>, y: &BTreeSet<usize>| x.len() < y.len() && x.is_subset(y);
        if strict(&sa, &sb) || strict(&sb, &sa) {
            return 0;
        }
        let mut near: BTreeSet<usize> = self.ts.support(&self.c.act_root(self.rs, a)).unwrap();
        near.extend(self.ts.support(&self.c.act_root_inv(self.rs, a)).unwrap());
        sb.iter().filter(|x| near.contains(x) && !sa.contains(x)).count() as i64
    }

    /// Evaluates the degree without moving along `tau_c`, if one of the defining cases applies.
    fn direct(&self, a: &[i64], b: &[i64]) -> Option<i64> {
        let delta = self.ts.delta().as_slice();
        if (a == delta && self.in_apt(b)) || (b == delta && self.in_apt(a)) {
            return Some(0);
        }
        if self.ts.apt_re.contains(a) && self.ts.apt_re.contains(b) {
            return Some(self.tube_degree(a, b));
        }
        if let Some(i) = is_neg_simple(a) {
            return Some(b[i]);
        }
        if let Some(i) = is_neg_simple(b) {
            return Some(coroot_coeffs(self.rs, a)[i]);
        }
        None
    }

    pub fn degree(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        if let Some(d) = self.direct(a, b) {
            return Ok(d);
        }
        let (mut fa, mut fb) = (a.to_vec(), b.to_vec());
        let (mut ba, mut bb) = (a.to_vec(), b.to_vec());
        for _ in 0..self.cap {
            fa = tau(self.rs, self.c, &fa);
            fb = tau(self.rs, self.c, &fb);
            if let Some(d) = self.direct(&fa, &fb) {
                return Ok(d);
            }
            ba = tau_inv(self.rs, self.c, &ba);
            bb = tau_inv(self.rs, self.c, &bb);
            if let Some(d) = self.direct(&ba, &bb) {
                return Ok(d);
            }
        }
        Err(Error::ResolutionCapExceeded(self.cap))
    }

    pub fn table(&self, roots: &[Root]) -> Result<Vec<Vec<i64>>> {
        roots
            .par_iter()
            .map(|a| roots.iter().map(|b| self.degree(a, b)).collect::<Result<Vec<_>>>())
            .collect()
    }
}

/// Violations of the defining conditions of the compatibility degree on `roots`, as
/// human-readable strings.
pub fn check_compat_axioms(cm: &Compatibility, roots: &[Root]) -> Result<Vec<String>> {
    let table = cm.table(roots)?;
    let idx: BTreeMap<&Root, usize> = roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let delta = cm.ts.delta();
    let mut bad = Vec::new();
    for (i, a) in roots.iter().enumerate() {
        for (j, b) in roots.iter().enumerate() {
            let d = table[i][j];
            if let Some(k) = is_neg_simple(a) {
                if d != b[k] {
                    bad.push(format!("base {a:?} {b:?}"));
                }
            }
            if let Some(k) = is_neg_simple(b) {
                if d != coroot_coeffs(cm.rs, a)[k] {
                    bad.push(format!("cobase {a:?} {b:?}"));
                }
            }
            if cm.ts.apt_re.contains(a) && cm.ts.apt_re.contains(b) && d != cm.tube_degree(a, b) {
                bad.push(format!("tube {a:?} {b:?}"));
            }
            if (a == delta && cm.in_apt(b)) || (b == delta && cm.in_apt(a)) {
                if d != 0 {
                    bad.push(format!("delta {a:?} {b:?}"));
                }
            }
            let ta = tau(cm.rs, cm.c, a);
            let tb = tau(cm.rs, cm.c, b);
            let td = match (idx.get(&ta), idx.get(&tb)) {
                (Some(&x), Some(&y)) => table[x][y],
                _ => cm.degree(&ta, &tb)?,
            };
            if td != d {
                bad.push(format!("tau {a:?} {b:?}"));
            }
            if (d == 0) != (table[j][i] == 0) {
                bad.push(format!("symmetry {a:?} {b:?}"));
            }
        }
    }
    Ok(bad)
}

#[derive(Debug, Clone, Serialize)]
pub struct Cluster {
    pub roots: Vec<Root>,
    pub imaginary: bool,
    /// Linearly independent of the expected size: `n` for real, `n - 1` for imaginary.
    pub complete: bool,
}

fn maximal_cliques(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn bk(r: Vec<usize>, p: Vec<usize>, x: Vec<usize>, adj: &[Vec<bool>], out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            out.push(r);
            return;
        }
        let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).unwrap();
        let (mut p, mut x) = (p, x);
        for v in p.clone().into_iter().filter(|&v| !adj[pivot][v]) {
            let mut r2 = r.clone();
            r2.push(v);
            let p2 = p.iter().cloned().filter(|&u| adj[v][u]).collect();
            let x2 = x.iter().cloned().filter(|&u| adj[v][u]).collect();
            bk(r2, p2, x2, adj, out);
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    bk(vec![], (0..adj.len()).collect(), vec![], adj, &mut out);
    for c in &mut out {
        c.sort();
    }
    out.sort();
    out
}

/// Maximal sets of pairwise compatible roots of `AP_c` up to height `h`. Maximality is
/// relative to the enumerated roots.
pub fn clusters(cm: &Compatibility, h: i64) -> Result<Vec<Cluster>> {
    let roots: Vec<Root> = ap_c(cm.rs, cm.ts, h).into_iter().map(|a| a.root).collect();
    let table = cm.table(&roots)?;
    let m = roots.len();
    let adj: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| i != j && table[i][j] == 0).collect()).collect();
    let n = cm.rs.n();
    Ok(maximal_cliques(&adj)
        .into_iter()
        .map(|cl| {
            let rs: Vec<Root> = cl.iter().map(|&i| roots[i].clone()).collect();
            let imaginary = rs.contains(cm.ts.delta());
            let want = if imaginary { n - 1 } else { n };
            let rk = rank(&rs.iter().map(|r| qvec(r)).collect::<Vec<_>>());
            Cluster { complete: rs.len() == want && rk == want, imaginary, roots: rs }
        })
        .collect())
}

/// `nu_c(Cone(C))` for a set of pairwise compatible roots, in dual coordinates.
pub fn nu_cone(rs: &RootSystem, c: &CoxeterElement, roots: &[Root]) -> Cone {
    let rays: Vec<Vec<Q>> = roots.iter().map(|r| rs.weight_to_dual(&c.nu_int(rs, r))).collect();
    Cone::from_generators(rs.n(), &rays)
}

/// `nu_c` of a root as an integer weight.
pub fn nu_weight(rs: &RootSystem, c: &CoxeterElement, beta: &[i64]) -> Vec<Q> {
    c.nu_int(rs, beta)
}

#[derive(Debug, Clone)]
pub struct FanCone {
    pub roots: Vec<Root>,
    pub imaginary: bool,
    pub cone: Cone,
}

/// `nu_c(Cone(C))` for every complete cluster `C` with roots up to height `h`. The faces of
/// these cones are the images of the compatible subsets, so only maximal ones are listed.
pub fn fan_c_image(cm: &Compatibility, h: i64) -> Result<Vec<FanCone>> {
    Ok(clusters(cm, h)?
        .into_par_iter()
        .filter(|cl| cl.complete)
        .map(|cl| FanCone { cone: nu_cone(cm.rs, cm.c, &cl.roots), imaginary: cl.imaginary, roots: cl.roots })
        .collect())
}

/// Pairs of cones whose intersection is not the image of their common roots, i.e. where the
/// cones fail to meet in a common face.
pub fn fan_face_violations(rs: &RootSystem, c: &CoxeterElement, cones: &[FanCone]) -> Vec<(usize, usize)> {
    let pairs: Vec<(usize, usize)> =
        (0..cones.len()).flat_map(|i| (i + 1..cones.len()).map(move |j| (i, j))).collect();
    pairs
        .into_par_iter()
        .filter(|&(i, j)| {
            let common: Vec<Root> = cones[i].roots.iter().filter(|r| cones[j].roots.contains(r)).cloned().collect();
            !cones[i].cone.intersect(&cones[j].cone).same_set(&nu_cone(rs, c, &common))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanType, ExchangeMatrix};
    use crate::rational::q;

    fn setup(b: Vec<Vec<i64>>) -> (RootSystem, CoxeterElement, TubeStructure) {
        let b = ExchangeMatrix::new(b).unwrap();
        let rs = RootSystem::from_exchange(&b).unwrap();
        let c = CoxeterElement::from_exchange(&b).unwrap();
        let CartanType::Affine(info) = rs.classify() else { panic!() };
        let ts = tube_structure(&rs, &c, &info);
        (rs, c, ts)
    }

    fn a11() -> (RootSystem, CoxeterElement, TubeStructure) {
        setup(vec![vec![0, 2], vec![-2, 0]])
    }

    fn a22() -> (RootSystem, CoxeterElement, TubeStructure) {
        setup(vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]])
    }

    #[test]
    fn tubes_in_rank_two() {
        let (_, _, ts) = a11();
        assert!(ts.phi_t_fin.is_empty());
        assert!(ts.apt_re.is_empty());
        assert_eq!(ts.xi, vec![vec![1, 1]]);
    }

    #[test]
    fn tubes_in_affine_a2() {
        let (rs, c, ts) = a22();
        assert_eq!(ts.phi_t_fin.len(), 1);
        assert_eq!(ts.xi.len(), 2);
        assert_eq!(ts.cycles.len(), 1);
        for r in ts.xi.iter().chain(&ts.apt_re) {
            assert!(ts.in_tube_hyperplane(r));
        }
        for r in &ts.apt_re {
            assert!(ts.apt_re.contains(&c.act_root(&rs, r)));
        }
    }

    #[test]
    fn almost_positive_roots_of_affine_a1() {
        let (rs, _, ts) = a11();
        let got: Vec<Root> = ap_c(&rs, &ts, 3).into_iter().map(|a| a.root).collect();
        let mut want = vec![vec![-1, 0], vec![0, -1], vec![1, 0], vec![0, 1], vec![2, 1], vec![1, 2], vec![1, 1]];
        want.sort_by_key(|r| (height(r), r.clone()));
        assert_eq!(got, want);
    }

    #[test]
    fn sigma_and_tau() {
        let (rs, c, ts) = a22();
        for s in 0..3 {
            assert_eq!(sigma(&rs, s, &neg(&rs.simple(s))), rs.simple(s));
            for r in [vec![1, 2, 0], vec![0, -1, 0], vec![1, 1, 1]] {
                assert_eq!(sigma(&rs, s, &sigma(&rs, s, &r)), r);
            }
        }
        assert_eq!(tau(&rs, &c, ts.delta()), *ts.delta());
        for a in ap_c(&rs, &ts, 4) {
            assert_eq!(tau_inv(&rs, &c, &tau(&rs, &c, &a.root)), a.root);
            assert!(classify_ap(&ts, &tau(&rs, &c, &a.root)).is_some(), "{:?}", a.root);
        }
    }

    #[test]
    fn compatibility_axioms_hold() {
        for (rs, c, ts) in [a11(), a22()] {
            let cm = Compatibility::new(&rs, &c, &ts, 4);
            let roots: Vec<Root> = ap_c(&rs, &ts, 4).into_iter().map(|a| a.root).collect();
            let bad = check_compat_axioms(&cm, &roots).unwrap();
            assert!(bad.is_empty(), "{bad:?}");
            for r in &ts.apt_re {
                assert_eq!(cm.degree(r, r).unwrap(), -1);
            }
        }
        let (rs, c, ts) = a11();
        let cm = Compatibility::new(&rs, &c, &ts, 4);
        assert_eq!(cm.degree(&[-1, 0], &[1, 1]).unwrap(), 1);
    }

    #[test]
    fn cluster_examples() {
        for (rs, c, ts) in [a11(), a22()] {
            let cm = Compatibility::new(&rs, &c, &ts, 4);
            let cl = clusters(&cm, 4).unwrap();
            let negs: Vec<Root> = (0..rs.n()).map(|i| neg(&rs.simple(i))).collect();
            assert!(cl.iter().any(|k| {
                let mut r = k.roots.clone();
                r.sort();
                let mut m = negs.clone();
                m.sort();
                r == m
            }));
            for k in cl.iter().filter(|k| k.imaginary) {
                assert!(k.complete);
                assert!(k.roots.iter().all(|r| r == ts.delta() || ts.apt_re.contains(r)));
            }
        }
        let (rs, c, ts) = a11();
        let cm = Compatibility::new(&rs, &c, &ts, 4);
        let imag: Vec<Cluster> = clusters(&cm, 4).unwrap().into_iter().filter(|k| k.imaginary).collect();
        assert_eq!(imag.len(), 1);
        assert_eq!(imag[0].roots, vec![vec![1, 1]]);
    }

    #[test]
    fn nu_of_negative_simples_is_dominant_chamber() {
        let (rs, c, _) = a22();
        let negs: Vec<Root> = (0..3).map(|i| neg(&rs.simple(i))).collect();
        let cone = nu_cone(&rs, &c, &negs);
        let dominant = Cone::from_nonneg(3, &(0..3).map(|i| rs.simple(i)).collect::<Vec<_>>());
        assert!(cone.same_set(&dominant));
        assert_eq!(nu_weight(&rs, &c, &[-1, 0, 0]), vec![q(1), q(0), q(0)]);
    }

    #[test]
    fn fan_cones_meet_in_faces_and_match_cambrian_cones() {
        for (rs, c, ts) in [a11(), a22()] {
            let cm = Compatibility::new(&rs, &c, &ts, 6);
            let fan = fan_c_image(&cm, 6).unwrap();
            assert!(fan_face_violations(&rs, &c, &fan).is_empty());
            let images: BTreeSet<Vec<i64>> = ap_c(&rs, &ts, 6)
                .iter()
                .map(|a| crate::rational::primitive(&rs.weight_to_dual(&c.nu_int(&rs, &a.root))))
                .collect();
            let mut matched = 0;
            for v in crate::sortable::sortable_up_to_length(&rs, &c, 6, 1 << 20).unwrap() {
                let cam = crate::sortable::c_cone(&rs, &v, &c);
                if !cam.cone.generators().rays.iter().all(|r| images.contains(&crate::rational::primitive(r))) {
                    continue;
                }
                matched += 1;
                assert!(fan.iter().any(|f| !f.imaginary && f.cone.same_set(&cam.cone)), "{:?}", v.element.word());
            }
            assert!(matched >= 5);
        }
    }
}
