//! Scattering-diagram checks on affine types beyond the two small desk instances: twisted and
//! non-simply-laced rank three, and both tube shapes of rank-four type A.

use std::collections::BTreeSet;

use affscat::cartan::ExchangeMatrix;
use affscat::scattering::*;

fn check(b: Vec<Vec<i64>>, label: &str, cycle_sizes: &[usize], h: i64) {
    let inst = AffineInstance::new(&ExchangeMatrix::new(b).unwrap()).unwrap();
    assert_eq!(inst.info.label, label);
    let mut sizes: Vec<usize> = inst.ts.cycles.iter().map(|c| c.len()).collect();
    sizes.sort();
    assert_eq!(sizes, cycle_sizes);

    let d = build_dcscat(&inst, h, h).unwrap();
    let easy = build_easy_scat(&inst, h, h).unwrap();
    assert!(d.same_walls(&easy));
    let ap: BTreeSet<_> = inst.ap_positive(h).into_iter().collect();
    assert_eq!(d.normals(), ap);
    for w in &d.walls {
        let class = classify_wall(&inst.rs, &inst.c, w);
        assert_eq!(class.incoming, w.origin == WallOrigin::Initial, "{:?}", w.normal);
        if w.origin != WallOrigin::Initial {
            assert!(class.gregarious, "{:?}", w.normal);
        }
    }
    assert!(check_consistency(&inst.rs, &d, h).unwrap().passed());
    assert!(!check_consistency(&inst.rs, &d.without_imaginary(), h).unwrap().passed());
}

#[test]
fn c2_untwisted() {
    check(vec![vec![0, 1, 0], vec![-2, 0, 2], vec![0, -1, 0]], "C_2^(1)", &[2], 4);
}

#[test]
fn a4_twisted() {
    check(vec![vec![0, 1, 0], vec![-2, 0, 1], vec![0, -2, 0]], "A_4^(2)", &[2], 5);
}

#[test]
fn d4_triply_twisted_has_long_tube_period() {
    // the long-root tube generators sum to 3 delta
    check(vec![vec![0, 1, 0], vec![-3, 0, 1], vec![0, -1, 0]], "D_4^(3)", &[2], 5);
}

#[test]
fn a3_one_three_cycle() {
    let b = vec![vec![0, 1, 0, 1], vec![-1, 0, 1, 0], vec![0, -1, 0, 1], vec![-1, 0, -1, 0]];
    check(b, "A_3^(1)", &[3], 4);
}

#[test]
fn a3_two_two_cycles() {
    let b = vec![vec![0, 1, 0, 1], vec![-1, 0, -1, 0], vec![0, 1, 0, 1], vec![-1, 0, -1, 0]];
    check(b, "A_3^(1)", &[2, 2], 4);
}
