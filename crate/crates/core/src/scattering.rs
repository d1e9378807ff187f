//! Cluster scattering diagrams of acyclic affine type: the doubled-Cambrian construction, the
//! almost-positive construction, wall classification, loop consistency, rank-two completion and
//! rampart queries.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::almost_positive::{ap_c, finite_positive_roots, tube_structure, TubeStructure};
use crate::cartan::{height, neg, AffineTypeInfo, CartanType, ExchangeMatrix, Root, RootSystem};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::forms::CoxeterElement;
use crate::geometry::{angle_key, cmp_angle};
use crate::rational::{dot_qi, primitive_int, q, qvec, solve, Q};
use crate::series::{
    basis_monomials, f_inf_series, path_product, CrossingForm, Direction, LaurentMonomialExpr, TruncatedSeries,
};
use crate::shards::{shard_cone, CutTable, ShardMode};
use crate::sortable::enumerate_ji_sortable;

/// An acyclic exchange matrix of affine type with its derived data.
#[derive(Debug, Clone)]
pub struct AffineInstance {
    pub b: ExchangeMatrix,
    pub rs: RootSystem,
    pub c: CoxeterElement,
    pub info: AffineTypeInfo,
    pub ts: TubeStructure,
}

impl AffineInstance {
    pub fn new(b: &ExchangeMatrix) -> Result<Self> {
        let rs = RootSystem::from_exchange(b)?;
        let c = CoxeterElement::from_exchange(b).ok_or(Error::NotAcyclic)?;
        let CartanType::Affine(info) = rs.classify() else {
            return Err(Error::NotAffine);
        };
        let ts = tube_structure(&rs, &c, &info);
        Ok(Self { b: b.clone(), rs, c, info, ts })
    }

    pub fn n(&self) -> usize {
        self.rs.n()
    }

    pub fn form(&self) -> CrossingForm {
        CrossingForm { b: self.b.b.clone() }
    }

    /// Positive roots of `AP_c` of height at most `h`.
    pub fn ap_positive(&self, h: i64) -> Vec<Root> {
        ap_c(&self.rs, &self.ts, h)
            .into_iter()
            .map(|a| a.root)
            .filter(|r| r.iter().all(|&x| x >= 0) && height(r) <= h)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum WallOrigin {
    Initial,
    SortableJI(Vec<usize>),
    InvSortableJI(Vec<usize>),
    AlmostPositive,
    Imaginary,
    Rank2Completed,
}

#[derive(Debug, Clone)]
pub struct Wall {
    pub normal: Root,
    /// Contained in the hyperplane of `normal`.
    pub cone: Cone,
    pub f: TruncatedSeries,
    pub origin: WallOrigin,
}

impl Wall {
    /// Same support and scattering term.
    pub fn same_as(&self, other: &Wall) -> bool {
        self.normal == other.normal && self.f == other.f && self.cone.same_set(&other.cone)
    }
}

#[derive(Serialize)]
struct WallJson<'a> {
    normal: &'a Root,
    ineqs: &'a Vec<Root>,
    series: &'a TruncatedSeries,
    origin: &'a WallOrigin,
}

impl Serialize for Wall {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WallJson { normal: &self.normal, ineqs: &self.cone.ineqs, series: &self.f, origin: &self.origin }.serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatDiagram {
    pub n: usize,
    pub b: Vec<Vec<i64>>,
    /// Root-height cap used to build the diagram.
    pub h: i64,
    /// Truncation in total `y`-degree.
    pub k: i64,
    pub walls: Vec<Wall>,
    /// Walls produced by both sortable families.
    pub overlap: usize,
}

impl ScatDiagram {
    pub fn without_imaginary(&self) -> Self {
        let mut d = self.clone();
        d.walls.retain(|w| w.origin != WallOrigin::Imaginary);
        d
    }

    /// Exact equality of the wall sets: normals, cones and scattering terms.
    pub fn same_walls(&self, other: &Self) -> bool {
        if self.walls.len() != other.walls.len() {
            return false;
        }
        let mut used = vec![false; other.walls.len()];
        self.walls.iter().all(|w| {
            let hit = other.walls.iter().enumerate().find(|(i, v)| !used[*i] && w.same_as(v));
            hit.map(|(i, _)| used[i] = true).is_some()
        })
    }

    pub fn normals(&self) -> BTreeSet<Root> {
        self.walls.iter().map(|w| w.normal.clone()).collect()
    }
}

/// `1 + y^beta` truncated at total `y`-degree `k`.
fn real_series(beta: &[i64], k: i64) -> TruncatedSeries {
    TruncatedSeries::binomial(beta.to_vec(), (k / height(beta)).max(0) as usize)
}

fn imaginary_series(inst: &AffineInstance, k: i64) -> TruncatedSeries {
    f_inf_series(&inst.info.delta, inst.info.is_a2k2, (k / height(&inst.info.delta)).max(0) as usize)
}

/// `{x in delta-perp : <x, beta> <= 0 for finite roots beta with omega_c(beta, delta) > 0}`.
pub fn d_inf_cone(inst: &AffineInstance) -> Cone {
    let delta = &inst.info.delta;
    let mut ineqs = Vec::new();
    for r in finite_positive_roots(&inst.rs, inst.info.aff_index) {
        for b in [r.clone(), neg(&r)] {
            if inst.c.omega_int(&inst.rs, &b, delta).is_positive() {
                ineqs.push(b);
            }
        }
    }
    Cone::new(inst.n(), vec![delta.clone()], ineqs)
}

fn imaginary_wall(inst: &AffineInstance, k: i64) -> Wall {
    Wall {
        normal: inst.info.delta.clone(),
        cone: d_inf_cone(inst),
        f: imaginary_series(inst, k),
        origin: WallOrigin::Imaginary,
    }
}

fn max_sortable_len(h: i64) -> usize {
    (4 * h + 4) as usize
}

pub fn build_dcscat(inst: &AffineInstance, h: i64, k: i64) -> Result<ScatDiagram> {
    let rs = &inst.rs;
    let targets = inst.ap_positive(h);
    let targets_real: Vec<Root> = targets.iter().filter(|r| **r != inst.info.delta).cloned().collect();
    let (fwd, bwd) =
        enumerate_ji_sortable(rs, &inst.c, h, &targets_real, max_sortable_len(h), crate::error::element_cap())?;
    let roots: Vec<Root> = fwd.keys().chain(bwd.keys()).cloned().collect();
    let table = CutTable::build(rs, &roots);
    let mut walls: Vec<Wall> = fwd
        .par_iter()
        .map(|(beta, j)| {
            let sh = shard_cone(rs, ShardMode::FromJI(&j.element), &table);
            let origin =
                if j.element.len() == 1 { WallOrigin::Initial } else { WallOrigin::SortableJI(j.element.word().to_vec()) };
            Wall { normal: beta.clone(), cone: sh.cone, f: real_series(beta, k), origin }
        })
        .collect();
    let inv_walls: Vec<Wall> = bwd
        .par_iter()
        .map(|(beta, j)| {
            let sh = shard_cone(rs, ShardMode::FromJI(&j.element), &table);
            Wall {
                normal: beta.clone(),
                cone: sh.cone.negated(),
                f: real_series(beta, k),
                origin: WallOrigin::InvSortableJI(j.element.word().to_vec()),
            }
        })
        .collect();
    let mut overlap = 0;
    for w in inv_walls {
        if walls.iter().any(|v| v.same_as(&w)) {
            overlap += 1;
        } else {
            walls.push(w);
        }
    }
    if height(&inst.info.delta) <= h {
        walls.push(imaginary_wall(inst, k));
    }
    sort_walls(&mut walls);
    Ok(ScatDiagram { n: inst.n(), b: inst.b.b.clone(), h, k, walls, overlap })
}

pub fn build_easy_scat(inst: &AffineInstance, h: i64, k: i64) -> Result<ScatDiagram> {
    let rs = &inst.rs;
    let roots = inst.ap_positive(h);
    let real: Vec<Root> = roots.iter().filter(|r| **r != inst.info.delta).cloned().collect();
    let table = CutTable::build(rs, &real);
    let mut walls: Vec<Wall> = roots
        .par_iter()
        .map(|beta| {
            if *beta == inst.info.delta {
                return imaginary_wall(inst, k);
            }
            let sh = shard_cone(rs, ShardMode::FromRoot(beta, &inst.c), &table);
            let origin = if height(beta) == 1 { WallOrigin::Initial } else { WallOrigin::AlmostPositive };
            Wall { normal: beta.clone(), cone: sh.cone, f: real_series(beta, k), origin }
        })
        .collect();
    sort_walls(&mut walls);
    Ok(ScatDiagram { n: inst.n(), b: inst.b.b.clone(), h, k, walls, overlap: 0 })
}

fn sort_walls(walls: &mut [Wall]) {
    walls.sort_by(|a, b| (height(&a.normal), &a.normal).cmp(&(height(&b.normal), &b.normal)));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WallClass {
    pub incoming: bool,
    pub gregarious: bool,
}

/// `omega_c(., beta)` in dual coordinates.
pub fn omega_dual(rs: &RootSystem, c: &CoxeterElement, beta: &[i64]) -> Vec<Q> {
    rs.weight_to_dual(&c.omega_weight(rs, &qvec(beta)))
}

pub fn classify_wall(rs: &RootSystem, c: &CoxeterElement, w: &Wall) -> WallClass {
    let v = omega_dual(rs, c, &w.normal);
    let minus: Vec<Q> = v.iter().map(|x| -x).collect();
    WallClass { incoming: w.cone.contains(&v), gregarious: w.cone.relint_contains(&minus) }
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceReport {
    /// A point in the relative interior of the face, in dual coordinates.
    pub point: Vec<String>,
    pub walls: usize,
    pub identity: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub faces: Vec<FaceReport>,
    pub failures: usize,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// The crossings of a small counterclockwise loop around `p`, in the transverse plane with
/// coordinates `(<x, u1>, <x, u2>)`.
fn loop_around<'a>(p: &[Q], u1: &[i64], u2: &[i64], walls: &[&'a Wall]) -> Result<Vec<(&'a TruncatedSeries, Direction)>> {
    let basis: Vec<Vec<Q>> = (0..u1.len()).map(|i| vec![q(u1[i]), q(u2[i])]).collect();
    let coords = |phi: &[i64]| -> Result<(Q, Q)> {
        let s = solve(&basis, &qvec(phi)).ok_or(Error::DegenerateFace)?;
        Ok((s[0].clone(), s[1].clone()))
    };
    let mut rays: Vec<((Q, Q), &'a Wall)> = Vec::new();
    for w in walls {
        let (a, b) = coords(&w.normal)?;
        let tight: Vec<(Q, Q)> = w
            .cone
            .ineqs
            .iter()
            .filter(|phi| dot_qi(p, phi).is_zero())
            .map(|phi| coords(phi))
            .collect::<Result<_>>()?;
        for d in [(b.clone(), -a.clone()), (-b.clone(), a.clone())] {
            if tight.iter().all(|(x, y)| !(x * &d.0 + y * &d.1).is_positive()) {
                rays.push((d, w));
            }
        }
    }
    rays.sort_by(|x, y| cmp_angle(&angle_key(&x.0 .0, &x.0 .1), &angle_key(&y.0 .0, &y.0 .1)));
    rays.iter()
        .map(|((r1, r2), w)| {
            let (a, b) = coords(&w.normal)?;
            let speed = -r2 * &a + r1 * &b;
            let dir = if speed.is_positive() { Direction::WithNormal } else { Direction::AgainstNormal };
            Ok((&w.f, dir))
        })
        .collect()
}

/// Codimension-two joints: each pairwise intersection of walls is cut into cells by every wall
/// hyperplane crossing it, so that a relative-interior point of a cell sees the same walls as
/// the whole cell. Returns a point of each cell with two normals spanning its transverse plane.
fn faces(d: &ScatDiagram, walls: &[&Wall]) -> Vec<(Vec<Q>, Root, Root)> {
    let n = d.n;
    let mut hyperplanes: BTreeSet<Root> = BTreeSet::new();
    for w in walls {
        for phi in std::iter::once(&w.normal).chain(&w.cone.ineqs).chain(&w.cone.eqs) {
            let mut h = primitive_int(phi);
            if h.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                h = neg(&h);
            }
            hyperplanes.insert(h);
        }
    }
    let hyperplanes: Vec<Root> = hyperplanes.into_iter().collect();
    let mut out: Vec<(Vec<Q>, Root, Root)> = Vec::new();
    let mut seen: BTreeSet<Vec<std::cmp::Ordering>> = BTreeSet::new();
    for i in 0..walls.len() {
        for j in i + 1..walls.len() {
            let (u, v) = (&walls[i].normal, &walls[j].normal);
            if crate::rational::rank(&[qvec(u), qvec(v)]) < 2 {
                continue;
            }
            let f = walls[i].cone.intersect(&walls[j].cone);
            if f.generators().dim() + 2 != n {
                continue;
            }
            let mut cells = vec![f];
            for h in &hyperplanes {
                cells = cells
                    .into_iter()
                    .flat_map(|c| {
                        let g = c.generators();
                        let vals = g.rays.iter().map(|r| dot_qi(r, h));
                        let crosses = g.lines.iter().any(|l| !dot_qi(l, h).is_zero())
                            || (vals.clone().any(|x| x.is_positive()) && vals.clone().any(|x| x.is_negative()));
                        if crosses {
                            vec![c.with_ineq(h.clone()), c.with_ineq(neg(h))]
                        } else {
                            vec![c]
                        }
                    })
                    .filter(|c| c.generators().dim() + 2 == n)
                    .collect();
            }
            for c in cells {
                let mut p = c.relint_point();
                if p.iter().all(|x| x.is_zero()) {
                    // a cell that is a linear subspace: every hyperplane vanishes on it
                    if let Some(l) = c.generators().lines.first() {
                        p = l.clone();
                    }
                }
                let key: Vec<_> = hyperplanes.iter().map(|h| dot_qi(&p, h).cmp(&Q::zero())).collect();
                if seen.insert(key) {
                    out.push((p, u.clone(), v.clone()));
                }
            }
        }
    }
    out
}

pub fn check_consistency(rs: &RootSystem, d: &ScatDiagram, k: i64) -> Result<ConsistencyReport> {
    let form = CrossingForm { b: d.b.clone() };
    let active: Vec<&Wall> = d.walls.iter().filter(|w| height(&w.normal) <= k).collect();
    let results: Vec<FaceReport> = faces(d, &active)
        .into_par_iter()
        .map(|(p, u1, u2)| {
            let here: Vec<&Wall> = active.iter().copied().filter(|w| w.cone.contains(&p)).collect();
            let seq = loop_around(&p, &u1, &u2, &here)?;
            let identity = basis_monomials(d.n, k).iter().all(|m| path_product(rs, &form, &seq, m) == *m);
            Ok(FaceReport { point: p.iter().map(crate::rational::fmt_q).collect(), walls: here.len(), identity })
        })
        .collect::<Result<_>>()?;
    let failures = results.iter().filter(|r| !r.identity).count();
    Ok(ConsistencyReport { faces: results, failures })
}

/// Order-by-order completion of the two initial walls of a rank-two exchange matrix up to
/// total `y`-degree `k`. Parallel outgoing rays are merged into one wall.
pub fn rank2_complete(b: &ExchangeMatrix, k: i64) -> Result<ScatDiagram> {
    assert_eq!(b.n, 2, "rank-two completion needs a 2x2 matrix");
    let rs = RootSystem::from_exchange(b)?;
    let form = CrossingForm { b: b.b.clone() };
    let omega_w = |beta: &[i64]| -> Vec<Q> {
        (0..2).map(|i| rs.d(i) * q((0..2).map(|j| b.b[i][j] * beta[j]).sum::<i64>())).collect()
    };
    let mut walls: Vec<Wall> = (0..2)
        .map(|i| Wall {
            normal: rs.simple(i),
            cone: Cone::hyperplane(&rs.simple(i)),
            f: TruncatedSeries::binomial(rs.simple(i), k as usize),
            origin: WallOrigin::Initial,
        })
        .collect();
    let mut outgoing: BTreeMap<Root, usize> = BTreeMap::new();
    let origin = vec![Q::zero(), Q::zero()];
    for deg in 2..=k {
        let refs: Vec<&Wall> = walls.iter().collect();
        let seq = loop_around(&origin, &[1, 0], &[0, 1], &refs)?;
        let mut fixes: Vec<(Root, usize, Q)> = Vec::new();
        for i in 0..2 {
            let m = LaurentMonomialExpr::x(2, i, deg);
            let img = path_product(&rs, &form, &seq, &m);
            for ((lambda, phi), coeff) in &img.terms {
                if height(phi) != deg || *lambda != m.terms.keys().next().unwrap().0 {
                    continue;
                }
                let beta = primitive_int(phi);
                let mult = (phi[0] + phi[1]) / height(&beta);
                assert!(beta.iter().all(|&x| x > 0), "defect on an initial wall");
                let co = rs.primitive_coroot(&beta);
                if co[i] == 0 {
                    continue;
                }
                // sign of the crossing at the outgoing ray
                let r = omega_w(&beta).iter().map(|x| -x).collect::<Vec<Q>>();
                let speed = -&r[1] * q(beta[0]) + &r[0] * q(beta[1]);
                let s = if speed.is_positive() { -1 } else { 1 };
                let a = -coeff / q(s * co[i]);
                if !fixes.iter().any(|(bb, mm, _)| *bb == beta && *mm == mult as usize) {
                    fixes.push((beta, mult as usize, a));
                }
            }
        }
        for (beta, mult, a) in fixes {
            let idx = *outgoing.entry(beta.clone()).or_insert_with(|| {
                let r = omega_w(&beta).iter().map(|x| -x).collect::<Vec<Q>>();
                let side = (0..2).map(|i| rs.simple(i)).chain((0..2).map(|i| neg(&rs.simple(i))));
                let bound = side.clone().find(|g| dot_qi(&r, g).is_negative()).unwrap();
                walls.push(Wall {
                    normal: beta.clone(),
                    cone: Cone::new(2, vec![beta.clone()], vec![bound]),
                    f: TruncatedSeries::one(beta.clone(), (k / height(&beta)) as usize),
                    origin: WallOrigin::Rank2Completed,
                });
                walls.len() - 1
            });
            let mut factor = TruncatedSeries::one(beta.clone(), walls[idx].f.k());
            factor.coeffs[mult] = a;
            walls[idx].f = walls[idx].f.mul(&factor)?;
        }
    }
    for w in &mut walls {
        w.f = w.f.truncate((k / height(&w.normal)) as usize);
    }
    walls.retain(|w| !w.f.is_one());
    sort_walls(&mut walls);
    Ok(ScatDiagram { n: 2, b: b.b.clone(), h: k, k, walls, overlap: 0 })
}

/// Indices of walls containing `p` (a weight in fundamental-weight coordinates).
pub fn rampart_set(rs: &RootSystem, d: &ScatDiagram, p: &[Q]) -> BTreeSet<usize> {
    let f = rs.weight_to_dual(p);
    d.walls.iter().enumerate().filter(|(_, w)| w.cone.contains(&f)).map(|(i, _)| i).collect()
}

/// Parameters `t` in `[0, 1]` where the segment `p + t (q - p)` enters or leaves `cone`.
fn breakpoints(cone: &Cone, p: &[Q], dir: &[Q]) -> Vec<Q> {
    let mut lo = Q::zero();
    let mut hi = q(1);
    let mut empty = false;
    let mut apply = |phi: &[i64], eq: bool| {
        let a = dot_qi(p, phi);
        let b = dot_qi(dir, phi);
        // a + t b <= 0 (and >= 0 when eq)
        if b.is_zero() {
            if a.is_positive() || (eq && !a.is_zero()) {
                empty = true;
            }
        } else {
            let t = -&a / &b;
            if eq {
                if t > lo {
                    lo = t.clone();
                }
                if t < hi {
                    hi = t;
                }
            } else if b.is_positive() {
                if t < hi {
                    hi = t;
                }
            } else if t > lo {
                lo = t;
            }
        }
    };
    for e in &cone.eqs {
        apply(e, true);
    }
    for a in &cone.ineqs {
        apply(a, false);
    }
    if empty || lo > hi {
        return vec![];
    }
    vec![lo, hi]
}

/// Whether every point of the segment from `p` to `q` has the rampart set of `p`.
pub fn scat_cone_eq(rs: &RootSystem, d: &ScatDiagram, p: &[Q], qq: &[Q]) -> bool {
    let fp = rs.weight_to_dual(p);
    let fq = rs.weight_to_dual(qq);
    let dir: Vec<Q> = fq.iter().zip(&fp).map(|(a, b)| a - b).collect();
    let mut ts: Vec<Q> = vec![Q::zero(), q(1)];
    for w in &d.walls {
        ts.extend(breakpoints(&w.cone, &fp, &dir));
    }
    ts.sort();
    ts.dedup();
    let mut samples = ts.clone();
    for w in ts.windows(2) {
        samples.push((&w[0] + &w[1]) / q(2));
    }
    let base = rampart_set(rs, d, p);
    samples.iter().all(|t| {
        let x: Vec<Q> = p.iter().zip(qq).map(|(a, b)| a + t * (b - a)).collect();
        rampart_set(rs, d, &x) == base
    })
}
