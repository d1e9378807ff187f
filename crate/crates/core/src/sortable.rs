//! Coxeter-sortable elements, the projection `pi_down`, Cambrian cones and the
//! enumeration of sortable join-irreducibles.

use std::collections::{BTreeMap, HashSet};

use crate::cartan::{height, Root, RootSystem};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::forms::CoxeterElement;
use crate::weyl::GroupElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortableWitness {
    pub element: GroupElement,
    /// Concatenation of blocks, each a subword of the running Coxeter word.
    pub sorting_word: Vec<usize>,
    /// Block lengths of the sorting word.
    pub blocks: Vec<Vec<usize>>,
}

/// Runs the initial-letter recursion on `w` with Coxeter word `cw` over a parabolic
/// subgroup, pushing the letters of the sorting word onto `out`.
fn sort_rec(rs: &RootSystem, w: &GroupElement, cw: &[usize], out: &mut Vec<usize>) -> bool {
    let mut w = w.clone();
    let mut cw = cw.to_vec();
    loop {
        if w.is_empty() {
            return true;
        }
        let Some(&s) = cw.first() else {
            return false;
        };
        if !w.is_left_ascent(s) {
            out.push(s);
            w = w.mul_left(rs, s);
            cw.rotate_left(1);
        } else {
            if w.inversions().iter().any(|r| r[s] != 0) {
                return false;
            }
            cw.remove(0);
        }
    }
}

/// Splits a sorting word into the blocks read off from repeated passes through `c`.
fn blocks_of(word: &[usize], c: &[usize]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let pos = |s: usize| c.iter().position(|&t| t == s).unwrap();
    for &s in word {
        if let Some(&last) = cur.last() {
            if pos(s) <= pos(last) {
                blocks.push(std::mem::take(&mut cur));
            }
        }
        cur.push(s);
    }
    if !cur.is_empty() {
        blocks.push(cur);
    }
    blocks
}

pub fn is_c_sortable(rs: &RootSystem, w: &GroupElement, c: &CoxeterElement) -> Option<SortableWitness> {
    let mut word = Vec::new();
    sort_rec(rs, w, c.word(), &mut word).then(|| SortableWitness {
        element: w.clone(),
        blocks: blocks_of(&word, c.word()),
        sorting_word: word,
    })
}

fn pi_down_rec(rs: &RootSystem, w: &GroupElement, cw: &[usize]) -> GroupElement {
    if w.is_empty() || cw.is_empty() {
        return GroupElement::identity(rs.n());
    }
    let s = cw[0];
    if !w.is_left_ascent(s) {
        let mut rot = cw.to_vec();
        rot.rotate_left(1);
        pi_down_rec(rs, &w.mul_left(rs, s), &rot).mul_left(rs, s)
    } else {
        let mut mask = vec![false; rs.n()];
        for &t in &cw[1..] {
            mask[t] = true;
        }
        pi_down_rec(rs, &w.parabolic_restrict(rs, &mask), &cw[1..])
    }
}

/// The largest c-sortable element below `w` in weak order.
pub fn pi_down(rs: &RootSystem, w: &GroupElement, c: &CoxeterElement) -> SortableWitness {
    let v = pi_down_rec(rs, w, c.word());
    is_c_sortable(rs, &v, c).expect("projection is not sortable")
}

fn c_cone_rec(rs: &RootSystem, v: &GroupElement, cw: &[usize]) -> Vec<Root> {
    if cw.is_empty() {
        return vec![];
    }
    let s = cw[0];
    if !v.is_left_ascent(s) {
        let mut rot = cw.to_vec();
        rot.rotate_left(1);
        c_cone_rec(rs, &v.mul_left(rs, s), &rot)
            .into_iter()
            .map(|b| rs.reflect_simple_root(s, &b))
            .collect()
    } else {
        let mut out = c_cone_rec(rs, v, &cw[1..]);
        out.push(rs.simple(s));
        out
    }
}

#[derive(Debug, Clone)]
pub struct CambrianCone {
    pub v: SortableWitness,
    /// `C_c(v)`.
    pub normals: Vec<Root>,
    /// `{x : <x, beta> >= 0 for beta in C_c(v)}`.
    pub cone: Cone,
}

pub fn c_cone(rs: &RootSystem, v: &SortableWitness, c: &CoxeterElement) -> CambrianCone {
    let mut normals = c_cone_rec(rs, &v.element, c.word());
    normals.sort();
    let cone = Cone::from_nonneg(rs.n(), &normals);
    CambrianCone { v: v.clone(), normals, cone }
}

/// Whether the chamber `wD` lies in `{x : <x, beta> >= 0 for all beta in normals}`.
pub fn chamber_in_cone(w: &GroupElement, normals: &[Root]) -> bool {
    normals.iter().all(|b| w.act_inv(b).iter().all(|&x| x >= 0))
}

/// All c-sortable elements of length at most `max_len`, in canonical order.
pub fn sortable_up_to_length(
    rs: &RootSystem,
    c: &CoxeterElement,
    max_len: usize,
    cap: usize,
) -> Result<Vec<SortableWitness>> {
    let e = GroupElement::identity(rs.n());
    let mut all = vec![is_c_sortable(rs, &e, c).unwrap()];
    let mut frontier = vec![e];
    for _ in 0..max_len {
        let mut next: HashSet<GroupElement> = HashSet::new();
        for w in &frontier {
            for s in 0..rs.n() {
                if w.is_right_ascent(s) {
                    let u = w.mul_right(rs, s);
                    if !next.contains(&u) && is_c_sortable(rs, &u, c).is_some() {
                        next.insert(u);
                    }
                }
            }
        }
        let mut next: Vec<GroupElement> = next.into_iter().collect();
        next.sort();
        all.extend(next.iter().map(|u| is_c_sortable(rs, u, c).unwrap()));
        if all.len() > cap {
            return Err(Error::CapExceeded(cap));
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(all)
}

/// Sortable join-irreducibles keyed by cover-reflection root, over sortable elements up to
/// length `max_len`.
pub fn ji_sortable_up_to_length(
    rs: &RootSystem,
    c: &CoxeterElement,
    max_len: usize,
    cap: usize,
) -> Result<BTreeMap<Root, SortableWitness>> {
    let mut out = BTreeMap::new();
    for v in sortable_up_to_length(rs, c, max_len, cap)? {
        if let Some(beta) = v.element.join_irreducible_root() {
            let prev = out.insert(beta.clone(), v);
            assert!(prev.is_none(), "two sortable join-irreducibles share the cover root {beta:?}");
        }
    }
    Ok(out)
}

/// Sortable join-irreducibles with cover root of height at most `h`. The length bound grows
/// until every root of `targets` is covered by this map or by `other` (the map for the
/// inverse Coxeter element), or the length cap is reached.
pub fn enumerate_ji_sortable(
    rs: &RootSystem,
    c: &CoxeterElement,
    h: i64,
    targets: &[Root],
    max_len: usize,
    cap: usize,
) -> Result<(BTreeMap<Root, SortableWitness>, BTreeMap<Root, SortableWitness>)> {
    let cinv = c.inverse();
    let mut len = (h as usize).max(1);
    loop {
        let keep = |m: BTreeMap<Root, SortableWitness>| -> BTreeMap<Root, SortableWitness> {
            m.into_iter().filter(|(b, _)| height(b) <= h).collect()
        };
        let fwd = keep(ji_sortable_up_to_length(rs, c, len, cap)?);
        let bwd = keep(ji_sortable_up_to_length(rs, &cinv, len, cap)?);
        if targets.iter().all(|t| fwd.contains_key(t) || bwd.contains_key(t)) {
            return Ok((fwd, bwd));
        }
        if len >= max_len {
            return Err(Error::CapExceeded(max_len));
        }
        len = (len * 2).min(max_len);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::ExchangeMatrix;
    use crate::weyl::enumerate_up_to_length;

    fn setup(b: Vec<Vec<i64>>) -> (RootSystem, CoxeterElement) {
        let b = ExchangeMatrix::new(b).unwrap();
        (RootSystem::from_exchange(&b).unwrap(), CoxeterElement::from_exchange(&b).unwrap())
    }

    #[test]
    fn sortability_in_affine_a1() {
        let (rs, c) = setup(vec![vec![0, 2], vec![-2, 0]]);
        let e = GroupElement::identity(2);
        assert_eq!(is_c_sortable(&rs, &e, &c).unwrap().sorting_word, Vec::<usize>::new());
        let w = GroupElement::from_word(&rs, &[1, 0]).unwrap();
        assert!(is_c_sortable(&rs, &w, &c).is_none());
        let w = GroupElement::from_word(&rs, &[0, 1, 0]).unwrap();
        let sw = is_c_sortable(&rs, &w, &c).unwrap();
        assert_eq!(sw.sorting_word, vec![0, 1, 0]);
        assert_eq!(sw.blocks, vec![vec![0, 1], vec![0]]);
    }

    #[test]
    fn projection_in_affine_a1() {
        let (rs, c) = setup(vec![vec![0, 2], vec![-2, 0]]);
        let w = GroupElement::from_word(&rs, &[1, 0]).unwrap();
        assert_eq!(pi_down(&rs, &w, &c).element, GroupElement::from_word(&rs, &[1]).unwrap());
    }

    #[test]
    fn projection_matches_brute_force() {
        for b in [
            vec![vec![0, 2], vec![-2, 0]],
            vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]],
            vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]],
        ] {
            let (rs, c) = setup(b);
            let all = enumerate_up_to_length(&rs, 5, 100_000).unwrap();
            let sortables: Vec<&GroupElement> = all.iter().filter(|w| is_c_sortable(&rs, w, &c).is_some()).collect();
            for w in &all {
                let p = pi_down(&rs, w, &c).element;
                let below: Vec<&&GroupElement> = sortables.iter().filter(|v| v.weak_leq(w)).collect();
                assert!(below.iter().all(|v| v.weak_leq(&p)));
                assert!(p.weak_leq(w));
                // chamber of w lies in the Cambrian cone of its projection
                let cc = c_cone(&rs, &is_c_sortable(&rs, &p, &c).unwrap(), &c);
                assert!(chamber_in_cone(w, &cc.normals));
            }
        }
    }

    #[test]
    fn cambrian_cone_examples() {
        let (rs, c) = setup(vec![vec![0, 2], vec![-2, 0]]);
        let e = is_c_sortable(&rs, &GroupElement::identity(2), &c).unwrap();
        assert_eq!(c_cone(&rs, &e, &c).normals, vec![vec![0, 1], vec![1, 0]]);
        let s1 = is_c_sortable(&rs, &GroupElement::from_word(&rs, &[0]).unwrap(), &c).unwrap();
        assert_eq!(c_cone(&rs, &s1, &c).normals, vec![vec![-1, 0], vec![2, 1]]);
    }

    #[test]
    fn finite_a2_has_one_ji_per_positive_root() {
        let (rs, c) = setup(vec![vec![0, 1], vec![-1, 0]]);
        let m = ji_sortable_up_to_length(&rs, &c, 3, 100).unwrap();
        let keys: Vec<Root> = m.keys().cloned().collect();
        let mut roots = rs.real_roots_up_to_height(10);
        roots.sort();
        assert_eq!(keys, roots);
    }

    #[test]
    fn simple_roots_give_simple_reflections() {
        let (rs, c) = setup(vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]]);
        let m = ji_sortable_up_to_length(&rs, &c, 4, 10_000).unwrap();
        for s in 0..3 {
            assert_eq!(m[&rs.simple(s)].element.word(), &[s]);
        }
        let (rs, c) = setup(vec![vec![0, 2], vec![-2, 0]]);
        let m = ji_sortable_up_to_length(&rs, &c, 4, 10_000).unwrap();
        assert_eq!(m[&vec![2, 1]].element, GroupElement::from_word(&rs, &[0, 1]).unwrap());
    }
}
