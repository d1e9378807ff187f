//! Rank-two subsystems, canonical roots, cutting, and shard cones.
//!
//! A root `gamma` is canonical in its plane `P` exactly when `inv(t_gamma)` meets `P` only in
//! `gamma`. Every root cutting `beta` lies in a plane where `beta` is a positive combination of
//! the two canonical roots, so it has smaller height than `beta`; cut sets are therefore exact.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use rayon::prelude::*;

use crate::cartan::{height, Root, RootSystem};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::forms::CoxeterElement;
use crate::rational::{qvec, rank};
use crate::weyl::{enumerate_up_to_length, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank2Subsystem {
    pub plane: [Root; 2],
    /// Positive real roots in the plane up to the requested height.
    pub roots: Vec<Root>,
    pub canonical: [Root; 2],
}

fn rank_of(vs: &[&[i64]]) -> usize {
    let rows: Vec<_> = vs.iter().map(|v| qvec(v)).collect();
    rank(&rows)
}

pub fn in_plane(u: &[i64], v: &[i64], x: &[i64]) -> bool {
    rank_of(&[u, v, x]) == 2
}

fn reflection_inversions(rs: &RootSystem, gamma: &[i64]) -> BTreeSet<Root> {
    GroupElement::reflection(rs, gamma)
        .expect("not a positive real root")
        .inversions()
        .clone()
}

/// Whether the positive real root `gamma` is canonical in the plane spanned by `u` and `v`.
pub fn is_canonical_in(rs: &RootSystem, gamma: &[i64], u: &[i64], v: &[i64]) -> bool {
    reflection_inversions(rs, gamma)
        .iter()
        .all(|r| r == gamma || !in_plane(u, v, r))
}

pub fn canonical_roots_rank2(rs: &RootSystem, beta: &[i64], gamma: &[i64], h: i64) -> Result<Rank2Subsystem> {
    assert_eq!(rank_of(&[beta, gamma]), 2, "plane needs two independent roots");
    let roots: Vec<Root> = rs
        .real_roots_up_to_height(h)
        .into_iter()
        .filter(|r| in_plane(beta, gamma, r))
        .collect();
    let mut canon: Vec<Root> = roots.iter().filter(|r| is_canonical_in(rs, r, beta, gamma)).cloned().collect();
    canon.sort();
    if canon.len() != 2 {
        return Err(Error::HeightInsufficient(h));
    }
    Ok(Rank2Subsystem {
        plane: [beta.to_vec(), gamma.to_vec()],
        roots,
        canonical: [canon[0].clone(), canon[1].clone()],
    })
}

/// All roots cutting the positive real root `beta`, together with the canonical pair of each
/// plane through `beta` in which `beta` is not canonical.
fn cut_planes(rs: &RootSystem, beta: &[i64]) -> Vec<[Root; 2]> {
    let inv = reflection_inversions(rs, beta);
    let below = rs.real_roots_up_to_height(height(beta) - 1);
    let mut planes: Vec<[Root; 2]> = Vec::new();
    let mut seen: Vec<Root> = Vec::new();
    for g in inv.iter().filter(|r| r.as_slice() != beta) {
        if seen.iter().any(|s| in_plane(beta, g, s)) {
            continue;
        }
        seen.push(g.clone());
        let canon: Vec<Root> = below
            .iter()
            .filter(|r| in_plane(beta, g, r) && is_canonical_in(rs, r, beta, g))
            .cloned()
            .collect();
        assert_eq!(canon.len(), 2, "plane through {beta:?} lacks a canonical pair");
        planes.push([canon[0].clone(), canon[1].clone()]);
    }
    planes
}

pub fn cut(rs: &RootSystem, beta: &[i64]) -> BTreeSet<Root> {
    cut_planes(rs, beta).into_iter().flatten().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSet {
    pub roots: BTreeSet<Root>,
    /// True when no cutting root was dropped by the height cap.
    pub certified: bool,
}

/// Roots of height at most `h` cutting `beta`.
pub fn cut_set(rs: &RootSystem, beta: &[i64], h: i64) -> CutSet {
    let roots = cut(rs, beta).into_iter().filter(|g| height(g) <= h).collect();
    CutSet { roots, certified: h >= height(beta) - 1 }
}

/// Cut sets for a fixed list of roots, computed up front so later phases can share them.
#[derive(Debug, Clone, Default)]
pub struct CutTable(BTreeMap<Root, BTreeSet<Root>>);

impl CutTable {
    pub fn build(rs: &RootSystem, roots: &[Root]) -> Self {
        Self(roots.par_iter().map(|b| (b.clone(), cut(rs, b))).collect())
    }

    pub fn get(&self, rs: &RootSystem, beta: &[i64]) -> BTreeSet<Root> {
        self.0.get(beta).cloned().unwrap_or_else(|| cut(rs, beta))
    }
}

#[derive(Debug, Clone)]
pub struct ShardCone {
    pub normal: Root,
    pub cut_list: Vec<Root>,
    pub cone: Cone,
}

impl ShardCone {
    fn new(normal: Root, cut_list: Vec<Root>) -> Self {
        let cone = Cone::new(normal.len(), vec![normal.clone()], cut_list.clone());
        Self { normal, cut_list, cone }
    }
}

pub enum ShardMode<'a> {
    FromJI(&'a GroupElement),
    FromRoot(&'a [i64], &'a CoxeterElement),
}

pub fn shard_cone(rs: &RootSystem, mode: ShardMode, table: &CutTable) -> ShardCone {
    match mode {
        ShardMode::FromJI(j) => {
            let beta = j.join_irreducible_root().expect("not join-irreducible");
            let cut_list = table.get(rs, &beta).into_iter().filter(|g| j.has_inversion(g)).collect();
            ShardCone::new(beta, cut_list)
        }
        ShardMode::FromRoot(beta, c) => {
            let cut_list = table
                .get(rs, beta)
                .into_iter()
                .filter(|g| c.omega_int(rs, g, beta).is_positive())
                .collect();
            ShardCone::new(beta.to_vec(), cut_list)
        }
    }
}

/// The chamber `wD` as a cone.
pub fn chamber_cone(rs: &RootSystem, w: &GroupElement) -> Cone {
    let normals: Vec<Root> = (0..rs.n()).map(|i| w.act(&rs.simple(i))).collect();
    Cone::from_nonneg(rs.n(), &normals)
}

/// The minimal element whose chamber sits above the shard along a facet, searched up to
/// length `max_len`.
pub fn ji_of_shard(rs: &RootSystem, shard: &ShardCone, max_len: usize) -> Result<GroupElement> {
    let n = rs.n();
    let all = enumerate_up_to_length(rs, max_len, crate::error::element_cap())?;
    let upper: Vec<GroupElement> = all
        .into_par_iter()
        .filter(|w| {
            w.covers(rs).iter().any(|(_, r)| *r == shard.normal) && {
                let facet = chamber_cone(rs, w).with_eq(shard.normal.clone());
                facet.intersect(&shard.cone).dim() == n - 1
            }
        })
        .collect();
    let min = upper
        .iter()
        .find(|u| upper.iter().all(|w| u.weak_leq(w)))
        .ok_or(Error::NotFoundWithinL(max_len))?;
    if min.join_irreducible_root().is_none() {
        return Err(Error::NotFoundWithinL(max_len));
    }
    Ok(min.clone())
}

pub fn is_codim_one(s: &ShardCone) -> bool {
    s.cone.dim() + 1 == s.normal.len()
}
