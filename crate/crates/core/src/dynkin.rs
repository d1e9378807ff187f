//! Table of affine Dynkin diagrams and Cartan-matrix isomorphism matching.

/// Cartan matrix from node squared lengths and bonds: `a_ij = -max(len_i, len_j) / len_i`
/// across a bond, zero otherwise.
fn from_lengths(lengths: &[i64], edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let n = lengths.len();
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in edges {
        let l = lengths[i].max(lengths[j]);
        a[i][j] = -l / lengths[i];
        a[j][i] = -l / lengths[j];
    }
    a
}

fn chain(n: usize) -> Vec<(usize, usize)> {
    (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()
}

/// Star with centre 0 and arms of the given lengths.
fn star(arms: &[usize]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in arms {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    edges
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// All affine Cartan matrices with `n` nodes, labelled.
pub fn affine_table(n: usize) -> Vec<(String, Vec<Vec<i64>>)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let l = n - 1;
    let mut push_pair = |label: String, dual: Option<String>, a: Vec<Vec<i64>>| {
        if let Some(d) = dual {
            out.push((d, transpose(&a)));
        }
        out.push((label, a));
    };
    if l == 1 {
        push_pair("A_1^(1)".into(), None, vec![vec![2, -2], vec![-2, 2]]);
        push_pair("A_2^(2)".into(), None, from_lengths(&[4, 1], &[(0, 1)]));
    } else {
        let mut cyc = chain(n);
        cyc.push((n - 1, 0));
        push_pair(format!("A_{l}^(1)"), None, from_lengths(&vec![1; n], &cyc));
        let mut lens = vec![2; n];
        lens[0] = 4;
        lens[n - 1] = 1;
        push_pair(format!("A_{}^(2)", 2 * l), None, from_lengths(&lens, &chain(n)));
        // C_l^(1) and its dual D_{l+1}^(2)
        let mut lens = vec![1; n];
        lens[0] = 2;
        lens[n - 1] = 2;
        push_pair(format!("C_{l}^(1)"), Some(format!("D_{}^(2)", l + 1)), from_lengths(&lens, &chain(n)));
    }
    if l >= 3 {
        // B_l^(1) and its dual A_{2l-1}^(2)
        let mut edges = vec![(0, 2), (1, 2)];
        edges.extend((2..l).map(|i| (i, i + 1)));
        let mut lens = vec![2; n];
        lens[l] = 1;
        push_pair(format!("B_{l}^(1)"), Some(format!("A_{}^(2)", 2 * l - 1)), from_lengths(&lens, &edges));
    }
    if l == 4 {
        push_pair("D_4^(1)".into(), None, from_lengths(&[1; 5], &star(&[1, 1, 1, 1])));
    } else if l >= 5 {
        let mut edges = vec![(0, 2), (1, 2)];
        edges.extend((2..l - 2).map(|i| (i, i + 1)));
        edges.push((l - 2, l - 1));
        edges.push((l - 2, l));
        push_pair(format!("D_{l}^(1)"), None, from_lengths(&vec![1; n], &edges));
    }
    match l {
        2 => push_pair("G_2^(1)".into(), Some("D_4^(3)".into()), from_lengths(&[3, 3, 1], &chain(3))),
        4 => push_pair("F_4^(1)".into(), Some("E_6^(2)".into()), from_lengths(&[2, 2, 2, 1, 1], &chain(5))),
        6 => push_pair("E_6^(1)".into(), None, from_lengths(&[1; 7], &star(&[2, 2, 2]))),
        7 => push_pair("E_7^(1)".into(), None, from_lengths(&[1; 8], &star(&[1, 3, 3]))),
        8 => push_pair("E_8^(1)".into(), None, from_lengths(&[1; 9], &star(&[1, 2, 5]))),
        _ => {}
    }
    out
}

/// Finds a permutation `p` with `a[p[i]][p[j]] == t[i][j]` for all `i, j`.
pub fn isomorphism(a: &[Vec<i64>], t: &[Vec<i64>]) -> Option<Vec<usize>> {
    let n = a.len();
    if t.len() != n {
        return None;
    }
    let profile = |m: &[Vec<i64>], i: usize| {
        let mut r: Vec<(i64, i64)> = (0..n).filter(|&j| j != i).map(|j| (m[i][j], m[j][i])).collect();
        r.sort_unstable();
        r
    };
    let pa: Vec<_> = (0..n).map(|i| profile(a, i)).collect();
    let pt: Vec<_> = (0..n).map(|i| profile(t, i)).collect();
    fn go(
        i: usize,
        p: &mut Vec<usize>,
        used: &mut [bool],
        a: &[Vec<i64>],
        t: &[Vec<i64>],
        pa: &[Vec<(i64, i64)>],
        pt: &[Vec<(i64, i64)>],
    ) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || pa[cand] != pt[i] {
                continue;
            }
            if (0..i).all(|j| a[cand][p[j]] == t[i][j] && a[p[j]][cand] == t[j][i]) {
                used[cand] = true;
                p.push(cand);
                if go(i + 1, p, used, a, t, pa, pt) {
                    return true;
                }
                p.pop();
                used[cand] = false;
            }
        }
        false
    }
    let mut p = Vec::with_capacity(n);
    let mut used = vec![false; n];
    go(0, &mut p, &mut used, a, t, &pa, &pt).then_some(p)
}

/// Label of the affine diagram isomorphic to `a`, if any.
pub fn affine_label(a: &[Vec<i64>]) -> Option<String> {
    affine_table(a.len())
        .into_iter()
        .find(|(_, t)| isomorphism(a, t).is_some())
        .map(|(label, _)| label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_for_rank_two() {
        assert_eq!(affine_label(&[vec![2, -2], vec![-2, 2]]).as_deref(), Some("A_1^(1)"));
        assert_eq!(affine_label(&[vec![2, -1], vec![-4, 2]]).as_deref(), Some("A_2^(2)"));
        assert_eq!(affine_label(&[vec![2, -4], vec![-1, 2]]).as_deref(), Some("A_2^(2)"));
        assert_eq!(affine_label(&[vec![2, -1], vec![-1, 2]]), None);
    }

    #[test]
    fn triangle_is_a2_untwisted() {
        let a = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
        assert_eq!(affine_label(&a).as_deref(), Some("A_2^(1)"));
    }

    #[test]
    fn table_entries_are_pairwise_non_isomorphic() {
        for n in 2..=9 {
            let t = affine_table(n);
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    assert!(isomorphism(&t[i].1, &t[j].1).is_none(), "{} vs {}", t[i].0, t[j].0);
                }
            }
        }
    }
}
