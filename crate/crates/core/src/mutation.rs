//! Matrix mutation, the piecewise-linear mutation maps `eta`, sign-vector probing of B-classes,
//! and the comparison of the scattering fan with the image of the cluster fan.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::almost_positive::{fan_c_image, fan_face_violations, Compatibility, FanCone};
use crate::cartan::{height, ExchangeMatrix, Root};
use crate::error::Result;
use crate::rational::{dot_qi, fmt_q, kernel, primitive, q, Q};
use crate::scattering::{build_dcscat, scat_cone_eq, AffineInstance, ScatDiagram};

/// An exchange matrix with extra rational coefficient rows underneath it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedExchangeMatrix {
    pub top: ExchangeMatrix,
    pub extra: Vec<Vec<Q>>,
}

fn mutated_entry(b_ij: &Q, b_ik: &Q, b_kj: i64) -> Q {
    let prod = b_ik * q(b_kj);
    if prod.is_positive() {
        b_ij + prod * q(b_kj.signum())
    } else {
        b_ij.clone()
    }
}

fn mutate_row(row: &[Q], top: &ExchangeMatrix, k: usize) -> Vec<Q> {
    (0..top.n).map(|j| if j == k { -&row[k] } else { mutated_entry(&row[j], &row[k], top.b[k][j]) }).collect()
}

pub fn mutate_matrix(b: &ExchangeMatrix, k: usize) -> ExchangeMatrix {
    let rows = (0..b.n)
        .map(|i| {
            (0..b.n)
                .map(|j| {
                    if i == k || j == k {
                        -b.b[i][j]
                    } else {
                        let prod = b.b[i][k] * b.b[k][j];
                        b.b[i][j] + b.b[k][j].signum() * prod.max(0)
                    }
                })
                .collect()
        })
        .collect();
    ExchangeMatrix { n: b.n, b: rows }
}

impl ExtendedExchangeMatrix {
    pub fn new(top: ExchangeMatrix, extra: Vec<Vec<Q>>) -> Self {
        assert!(extra.iter().all(|r| r.len() == top.n), "extra rows must have n entries");
        Self { top, extra }
    }

    pub fn mutate(&self, k: usize) -> Self {
        assert!(k < self.top.n, "mutation index out of range");
        let extra = self.extra.iter().map(|r| mutate_row(r, &self.top, k)).collect();
        Self { top: mutate_matrix(&self.top, k), extra }
    }

    /// `mu_{k_1} ... mu_{k_q}` for `word = [k_1, ..., k_q]`: the last letter acts first.
    pub fn mutate_along(&self, word: &[usize]) -> Self {
        word.iter().rev().fold(self.clone(), |m, &k| m.mutate(k))
    }
}

/// The mutation map `eta_{k_1 ... k_q}`: adjoin `x` as a row under `b`, mutate at `k_q`, then
/// `k_{q-1}`, and so on, and read off the row.
pub fn eta(b: &ExchangeMatrix, word: &[usize], x: &[Q]) -> Vec<Q> {
    let mut top = b.clone();
    let mut row = x.to_vec();
    for &k in word.iter().rev() {
        row = mutate_row(&row, &top, k);
        top = mutate_matrix(&top, k);
    }
    row
}

fn signs(v: &[Q]) -> Vec<i8> {
    v.iter().map(|x| if x.is_positive() { 1 } else if x.is_negative() { -1 } else { 0 }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BClassVerdict {
    /// The sign vectors differ after mutating along `word`; the points lie in different B-classes.
    Distinguished { word: Vec<usize> },
    /// No word of length at most `max_len` separates the points. Evidence only.
    IndistinctUpToL { max_len: usize },
}

/// Compares sign vectors of `eta` along every word of length at most `max_len` without
/// repeated adjacent letters (a repeated letter undoes the previous mutation).
pub fn b_class_probe(b: &ExchangeMatrix, x: &[Q], y: &[Q], max_len: usize) -> BClassVerdict {
    fn go(
        top: &ExchangeMatrix,
        x: &[Q],
        y: &[Q],
        word: &mut Vec<usize>,
        max_len: usize,
    ) -> Option<Vec<usize>> {
        if signs(x) != signs(y) {
            return Some(word.clone());
        }
        if word.len() == max_len {
            return None;
        }
        for k in 0..top.n {
            if word.last() == Some(&k) {
                continue;
            }
            let (x2, y2) = (mutate_row(x, top, k), mutate_row(y, top, k));
            let top2 = mutate_matrix(top, k);
            word.push(k);
            if let Some(w) = go(&top2, &x2, &y2, word, max_len) {
                return Some(w);
            }
            word.pop();
        }
        None
    }
    match go(b, x, y, &mut Vec::new(), max_len) {
        Some(word) => BClassVerdict::Distinguished { word },
        None => BClassVerdict::IndistinctUpToL { max_len },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub kind: String,
    pub points: Vec<Vec<String>>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FansReport {
    pub h: i64,
    pub k: i64,
    pub max_len: usize,
    /// Height bound used for clusters; larger than `h` so that cones next to height-`h` walls
    /// are complete.
    pub fan_height: i64,
    pub fan_cones: usize,
    pub skeleton_faces_checked: usize,
    pub sample_pairs: usize,
    pub unresolved_pairs: usize,
    pub same_cone_pairs: usize,
    /// Pairs in different cones that no word up to `max_len` separates.
    pub probe_unseparated: usize,
    pub exact_discrepancies: Vec<Discrepancy>,
    pub probe_contradictions: Vec<Discrepancy>,
}

impl FansReport {
    pub fn passed(&self) -> bool {
        self.exact_discrepancies.is_empty() && self.probe_contradictions.is_empty()
    }
}

fn fmt_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

/// Primitive normal of the hyperplane spanned by `rays`, oriented to be nonnegative when it is.
fn hyperplane_normal(rays: &[Vec<Q>], n: usize) -> Option<Root> {
    let ker = kernel(rays, n);
    if ker.len() != 1 {
        return None;
    }
    let v = primitive(&ker[0]);
    Some(if v.iter().all(|&x| x <= 0) { v.iter().map(|x| -x).collect() } else { v })
}

/// Fan cones with their extreme rays (aligned with the cluster roots) and whether every facet lies in a hyperplane of height at
/// most `h` (so that the scattering diagram truncated at `h` sees all of its walls).
struct ResolvedCone<'a> {
    fan: &'a FanCone,
    rays: Vec<Vec<Q>>,
    visible: bool,
}

fn resolve_cones<'a>(inst: &AffineInstance, fan: &'a [FanCone], h: i64) -> Vec<ResolvedCone<'a>> {
    let n = inst.n();
    fan.iter()
        .filter(|f| !f.imaginary)
        .map(|f| {
            let rays: Vec<Vec<Q>> =
                f.roots.iter().map(|r| inst.rs.weight_to_dual(&inst.c.nu_int(&inst.rs, r))).collect();
            let visible = (0..rays.len()).all(|skip| {
                let facet: Vec<Vec<Q>> =
                    rays.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r.clone()).collect();
                hyperplane_normal(&facet, n).is_some_and(|nm| height(&nm).abs() <= h)
            });
            ResolvedCone { fan: f, rays, visible }
        })
        .collect()
}

fn skeleton_discrepancies(
    d: &ScatDiagram,
    fan: &[FanCone],
    cones: &[ResolvedCone],
    n: usize,
    h: i64,
) -> (usize, Vec<Discrepancy>) {
    let mut out = Vec::new();
    // codimension-one faces: shared facets of two real cones, and the imaginary cones
    let mut facets: BTreeMap<Vec<Root>, (usize, Vec<Vec<Q>>)> = BTreeMap::new();
    for c in cones {
        for skip in 0..c.fan.roots.len() {
            let mut key: Vec<Root> = c.fan.roots.clone();
            key.remove(skip);
            key.sort();
            let mut rays = c.rays.clone();
            rays.remove(skip);
            facets.entry(key).or_insert((0, rays)).0 += 1;
        }
    }
    let mut faces: Vec<(Vec<Root>, Vec<Vec<Q>>)> =
        facets.into_iter().filter(|(_, (count, _))| *count >= 2).map(|(k, (_, r))| (k, r)).collect();
    for f in fan.iter().filter(|f| f.imaginary) {
        faces.push((f.roots.clone(), f.cone.generators().rays));
    }
    let mut checked = 0;
    for (roots, rays) in &faces {
        let Some(normal) = hyperplane_normal(rays, n) else {
            out.push(Discrepancy { kind: "degenerate_face".into(), points: rays.iter().map(|r| fmt_vec(r)).collect(), detail: format!("{roots:?}") });
            continue;
        };
        if normal.iter().any(|&x| x < 0) {
            out.push(Discrepancy { kind: "face_normal_not_positive".into(), points: vec![], detail: format!("{roots:?} {normal:?}") });
            continue;
        }
        if height(&normal) > h {
            continue;
        }
        checked += 1;
        let inside = d.walls.iter().any(|w| w.normal == normal && rays.iter().all(|r| w.cone.contains(r)));
        if !inside {
            out.push(Discrepancy {
                kind: "face_outside_walls".into(),
                points: rays.iter().map(|r| fmt_vec(r)).collect(),
                detail: format!("cluster roots {roots:?}, normal {normal:?}"),
            });
        }
    }
    // no wall may pass through the interior of a cone
    for w in &d.walls {
        for c in cones {
            let meet = w.cone.intersect(&c.fan.cone);
            if meet.generators().dim() + 1 != n {
                continue;
            }
            let on_facet = c.rays.iter().filter(|r| dot_qi(r, &w.normal).is_zero()).count() + 1 == n;
            if !on_facet {
                out.push(Discrepancy {
                    kind: "wall_cuts_cone".into(),
                    points: c.rays.iter().map(|r| fmt_vec(r)).collect(),
                    detail: format!("wall {:?} through cluster {:?}", w.normal, c.fan.roots),
                });
            }
        }
    }
    (checked, out)
}

fn sample_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| q(rng.gen_range(-6..=6)) + Q::new(rng.gen_range(-6..=6).into(), 13.into())).collect()
}

/// Compares the scattering fan of the instance with `nu_c` of its cluster fan: exactly on the
/// codimension-one skeleton, and on seeded sample pairs both exactly and by sign probes.
pub fn fans_compare(inst: &AffineInstance, h: i64, k: i64, max_len: usize, samples: usize, seed: u64) -> Result<FansReport> {
    let rs = &inst.rs;
    let n = inst.n();
    let d = build_dcscat(inst, h, k)?;
    let fan_height = h + height(&inst.info.delta);
    let cm = Compatibility::new(rs, &inst.c, &inst.ts, fan_height);
    let fan = fan_c_image(&cm, fan_height)?;
    let mut exact = Vec::new();
    for (i, j) in fan_face_violations(rs, &inst.c, &fan) {
        exact.push(Discrepancy {
            kind: "cones_not_meeting_in_face".into(),
            points: vec![],
            detail: format!("{:?} / {:?}", fan[i].roots, fan[j].roots),
        });
    }
    let cones = resolve_cones(inst, &fan, h);
    let (skeleton_faces_checked, skel) = skeleton_discrepancies(&d, &fan, &cones, n, h);
    exact.extend(skel);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let on_boundary = |f: &[Q]| -> bool {
        d.walls.iter().any(|w| w.cone.contains(f)) || cones.iter().any(|c| c.fan.cone.contains(f) && !c.fan.cone.relint_contains(f))
    };
    let mut pairs = Vec::with_capacity(samples);
    while pairs.len() < samples {
        let x = sample_point(&mut rng, n);
        let y = if rng.gen_bool(0.5) {
            x.iter().map(|a| a + Q::new(rng.gen_range(-3..=3).into(), 7.into())).collect()
        } else {
            sample_point(&mut rng, n)
        };
        if on_boundary(&rs.weight_to_dual(&x)) || on_boundary(&rs.weight_to_dual(&y)) {
            continue;
        }
        pairs.push((x, y));
    }
    let bt = inst.b.transpose();
    let locate = |x: &[Q]| -> Option<usize> {
        let f = rs.weight_to_dual(x);
        cones.iter().position(|c| c.fan.cone.relint_contains(&f)).filter(|&i| cones[i].visible)
    };
    let results: Vec<(bool, bool, bool, Option<Discrepancy>, Option<Discrepancy>)> = pairs
        .par_iter()
        .map(|(x, y)| {
            let (Some(cx), Some(cy)) = (locate(x), locate(y)) else {
                return (false, false, false, None, None);
            };
            let fan_eq = cx == cy;
            let scat_eq = scat_cone_eq(rs, &d, x, y);
            let points = vec![fmt_vec(x), fmt_vec(y)];
            let ex = (fan_eq != scat_eq).then(|| Discrepancy {
                kind: "scattering_vs_fan".into(),
                points: points.clone(),
                detail: format!("same scattering cone {scat_eq}, same fan cone {fan_eq}"),
            });
            let verdict = b_class_probe(&bt, x, y, max_len);
            let distinguished = matches!(verdict, BClassVerdict::Distinguished { .. });
            let contra = (scat_eq && distinguished).then(|| Discrepancy {
                kind: "probe_separates_scattering_cone".into(),
                points,
                detail: format!("{verdict:?}"),
            });
            (true, fan_eq, !fan_eq && !distinguished, ex, contra)
        })
        .collect();
    let mut report = FansReport {
        h,
        k,
        max_len,
        fan_height,
        fan_cones: fan.len(),
        skeleton_faces_checked,
        sample_pairs: pairs.len(),
        unresolved_pairs: 0,
        same_cone_pairs: 0,
        probe_unseparated: 0,
        exact_discrepancies: exact,
        probe_contradictions: Vec::new(),
    };
    for (resolved, same, unseparated, ex, contra) in results {
        report.unresolved_pairs += usize::from(!resolved);
        report.same_cone_pairs += usize::from(same);
        report.probe_unseparated += usize::from(unseparated);
        report.exact_discrepancies.extend(ex);
        report.probe_contradictions.extend(contra);
    }
    Ok(report)
}
