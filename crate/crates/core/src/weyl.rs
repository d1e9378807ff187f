//! Weyl-group elements with inversion sets, weak order, covers and parabolic restriction.
//!
//! `inv(w)` is the set of positive roots in the inversion sequence of a reduced word,
//! i.e. the positive roots sent negative by `w^{-1}`. Right multiplication by an ascent
//! adds `w(alpha_s)`.

use std::collections::{BTreeSet, HashSet};
use std::hash::{Hash, Hasher};

use crate::cartan::{is_nonneg, neg, Root, RootSystem};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GroupElement {
    word: Vec<usize>,
    inversions: BTreeSet<Root>,
    n: usize,
    /// Column `j` is `w(alpha_j)`.
    mat: Vec<Root>,
    /// Column `j` is `w^{-1}(alpha_j)`.
    inv_mat: Vec<Root>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.inversions == other.inversions
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inversions.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    /// Canonical total order: by length, then inversion set.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.inversions.cmp(&other.inversions))
    }
}

fn reflect_cols_right(rs: &RootSystem, cols: &[Root], s: usize) -> Vec<Root> {
    // (M S_s) e_j = M e_j - a_sj M e_s
    let ms = cols[s].clone();
    cols.iter()
        .enumerate()
        .map(|(j, c)| {
            let a = rs.a(s, j);
            c.iter().zip(&ms).map(|(x, y)| x - a * y).collect()
        })
        .collect()
}

fn reflect_cols_left(rs: &RootSystem, cols: &[Root], s: usize) -> Vec<Root> {
    cols.iter().map(|c| rs.reflect_simple_root(s, c)).collect()
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        let id: Vec<Root> = (0..n)
            .map(|j| {
                let mut v = vec![0; n];
                v[j] = 1;
                v
            })
            .collect();
        Self { word: vec![], inversions: BTreeSet::new(), n, mat: id.clone(), inv_mat: id }
    }

    /// Builds from a word, returning `None` if the word is not reduced.
    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Option<Self> {
        let mut w = Self::identity(rs.n());
        for &s in word {
            if !w.is_right_ascent(s) {
                return None;
            }
            w = w.mul_right(rs, s);
        }
        Some(w)
    }

    /// The reflection `t_beta` for a positive real root.
    pub fn reflection(rs: &RootSystem, beta: &[i64]) -> Option<Self> {
        let (path, i) = rs.reduce_to_simple(beta)?;
        let mut word = path.clone();
        word.push(i);
        word.extend(path.iter().rev());
        Self::from_word(rs, &word)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inversions(&self) -> &BTreeSet<Root> {
        &self.inversions
    }

    pub fn has_inversion(&self, beta: &[i64]) -> bool {
        self.inversions.contains(beta)
    }

    pub fn act(&self, v: &[i64]) -> Root {
        apply(&self.mat, v)
    }

    pub fn act_inv(&self, v: &[i64]) -> Root {
        apply(&self.inv_mat, v)
    }

    pub fn is_right_ascent(&self, s: usize) -> bool {
        is_nonneg(&self.mat[s])
    }

    pub fn is_left_ascent(&self, s: usize) -> bool {
        let mut a = vec![0; self.n];
        a[s] = 1;
        !self.inversions.contains(&a)
    }

    /// Inversion sequence of the stored reduced word.
    pub fn inversion_sequence(&self, rs: &RootSystem) -> Vec<Root> {
        let mut prefix = Self::identity(self.n);
        let mut out = Vec::with_capacity(self.len());
        for &s in &self.word {
            out.push(prefix.mat[s].clone());
            prefix = prefix.mul_right_unchecked(rs, s);
        }
        out
    }

    fn mul_right_unchecked(&self, rs: &RootSystem, s: usize) -> Self {
        let mut w = self.clone();
        w.word.push(s);
        w.mat = reflect_cols_right(rs, &self.mat, s);
        w.inv_mat = reflect_cols_left(rs, &self.inv_mat, s);
        w
    }

    /// `w s`.
    pub fn mul_right(&self, rs: &RootSystem, s: usize) -> Self {
        let beta = self.mat[s].clone();
        if is_nonneg(&beta) {
            let mut w = self.mul_right_unchecked(rs, s);
            w.inversions.insert(beta);
            w
        } else {
            let target = neg(&beta);
            let seq = self.inversion_sequence(rs);
            let i = seq.iter().position(|r| *r == target).expect("descent root missing from inversion sequence");
            let mut w = self.clone();
            w.word.remove(i);
            w.inversions.remove(&target);
            w.mat = reflect_cols_right(rs, &self.mat, s);
            w.inv_mat = reflect_cols_left(rs, &self.inv_mat, s);
            w
        }
    }

    /// `s w`.
    pub fn mul_left(&self, rs: &RootSystem, s: usize) -> Self {
        let alpha = rs.simple(s);
        let mut w = self.clone();
        w.mat = reflect_cols_left(rs, &self.mat, s);
        w.inv_mat = reflect_cols_right(rs, &self.inv_mat, s);
        if self.inversions.contains(&alpha) {
            let seq = self.inversion_sequence(rs);
            let i = seq.iter().position(|r| *r == alpha).unwrap();
            w.word.remove(i);
            w.inversions = self
                .inversions
                .iter()
                .filter(|r| **r != alpha)
                .map(|r| rs.reflect_simple_root(s, r))
                .collect();
        } else {
            w.word.insert(0, s);
            w.inversions = self.inversions.iter().map(|r| rs.reflect_simple_root(s, r)).collect();
            w.inversions.insert(alpha);
        }
        w
    }

    pub fn inverse(&self, rs: &RootSystem) -> Self {
        let mut word = self.word.clone();
        word.reverse();
        Self::from_word(rs, &word).unwrap()
    }

    pub fn weak_leq(&self, other: &Self) -> bool {
        self.len() <= other.len() && self.inversions.is_subset(&other.inversions)
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (0..self.n).filter(|&s| !self.is_right_ascent(s)).collect()
    }

    /// Elements covered by `w` with their cover-reflection roots.
    pub fn covers(&self, rs: &RootSystem) -> Vec<(GroupElement, Root)> {
        self.right_descents()
            .into_iter()
            .map(|s| (self.mul_right(rs, s), neg(&self.mat[s])))
            .collect()
    }

    /// The root of the unique cover reflection, if `w` is join-irreducible.
    pub fn join_irreducible_root(&self) -> Option<Root> {
        let d = self.right_descents();
        (d.len() == 1).then(|| neg(&self.mat[d[0]]))
    }

    /// `w` lies in the standard parabolic subgroup on the generators with `mask[i]`.
    pub fn in_parabolic(&self, mask: &[bool]) -> bool {
        self.word.iter().all(|&s| mask[s])
    }

    /// The unique `w_I` with `inv(w_I) = inv(w)` restricted to the parabolic root subsystem.
    pub fn parabolic_restrict(&self, rs: &RootSystem, mask: &[bool]) -> Self {
        let in_sub = |r: &Root| r.iter().enumerate().all(|(i, &x)| x == 0 || mask[i]);
        let mut remaining: BTreeSet<Root> = self.inversions.iter().filter(|r| in_sub(r)).cloned().collect();
        let mut word = Vec::new();
        while !remaining.is_empty() {
            let s = (0..self.n)
                .find(|&s| mask[s] && remaining.contains(&rs.simple(s)))
                .expect("restricted set is not an inversion set");
            remaining.remove(&rs.simple(s));
            remaining = remaining.iter().map(|r| rs.reflect_simple_root(s, r)).collect();
            word.push(s);
        }
        let w = Self::from_word(rs, &word).expect("restriction word not reduced");
        debug_assert!(w.inversions.iter().all(|r| self.inversions.contains(r)));
        w
    }
}

fn apply(cols: &[Root], v: &[i64]) -> Root {
    let n = v.len();
    let mut out = vec![0; n];
    for (j, &x) in v.iter().enumerate() {
        if x != 0 {
            for i in 0..n {
                out[i] += x * cols[j][i];
            }
        }
    }
    out
}

/// All elements of length at most `max_len`, in canonical order.
pub fn enumerate_up_to_length(rs: &RootSystem, max_len: usize, cap: usize) -> Result<Vec<GroupElement>> {
    let mut all = vec![GroupElement::identity(rs.n())];
    let mut frontier = all.clone();
    for _ in 0..max_len {
        let mut next: HashSet<GroupElement> = HashSet::new();
        for w in &frontier {
            for s in 0..rs.n() {
                if w.is_right_ascent(s) {
                    next.insert(w.mul_right(rs, s));
                }
            }
        }
        let mut next: Vec<GroupElement> = next.into_iter().collect();
        next.sort();
        all.extend(next.iter().cloned());
        if all.len() > cap {
            return Err(Error::CapExceeded(cap));
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(all)
}
