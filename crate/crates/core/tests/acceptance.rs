//! Acceptance suite: runs every criterion on the two desk instances, affine `A_1^(1)` and an
//! acyclic orientation of affine `A_2`, and prints one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use affscat::almost_positive::{ap_c, check_compat_axioms, tau, ApClass, Compatibility};
use affscat::cartan::{height, ExchangeMatrix, Root};
use affscat::mutation::{eta, fans_compare, ExtendedExchangeMatrix};
use affscat::rational::{primitive, q, q_frac, Q};
use affscat::scattering::*;
use affscat::shards::{ji_of_shard, shard_cone, CutTable, ShardMode};
use affscat::sortable::ji_sortable_up_to_length;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exch(b: Vec<Vec<i64>>) -> ExchangeMatrix {
    ExchangeMatrix::new(b).unwrap()
}

fn a11() -> Vec<Vec<i64>> {
    vec![vec![0, 2], vec![-2, 0]]
}

fn a22() -> Vec<Vec<i64>> {
    vec![vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]]
}

struct Desk {
    name: &'static str,
    inst: AffineInstance,
    dcscat: ScatDiagram,
    easy: ScatDiagram,
}

const H: i64 = 5;

fn desks() -> Vec<Desk> {
    [("A_1^(1)", a11()), ("A_2^(1)", a22())]
        .into_iter()
        .map(|(name, b)| {
            let inst = AffineInstance::new(&exch(b)).unwrap();
            let dcscat = build_dcscat(&inst, H, H).unwrap();
            let easy = build_easy_scat(&inst, H, H).unwrap();
            Desk { name, inst, dcscat, easy }
        })
        .collect()
}

/// Coefficients of the limiting wall, from the closed forms `(1 - q)^-2` and
/// `(1 + q) / (1 - q)^2`.
fn limiting_oracle(twisted: bool, m: usize) -> Q {
    q(if twisted { 2 * m as i64 + 1 } else { m as i64 + 1 })
}

fn rank2_limits() -> Outcome {
    let mut notes = vec![];
    for (b, delta, twisted) in [(a11(), vec![1, 1], false), (vec![vec![0, 1], vec![-4, 0]], vec![1, 2], true)] {
        let d = rank2_complete(&exch(b.clone()), 8).map_err(|e| e.to_string())?;
        let wall = d.walls.iter().find(|w| w.normal == delta).ok_or(format!("{b:?}: no limiting wall"))?;
        let top = 8 / height(&delta) as usize;
        for m in 0..=top {
            ensure(wall.f.coeffs[m] == limiting_oracle(twisted, m), || {
                format!("{b:?}: coefficient {m} is {}", wall.f.coeffs[m])
            })?;
        }
        notes.push(format!("{b:?} through q^{top}"));
    }
    Ok(notes.join(", "))
}

fn construction_identity(desks: &[Desk]) -> Outcome {
    for d in desks {
        ensure(d.dcscat.same_walls(&d.easy), || format!("{}: wall sets differ", d.name))?;
    }
    Ok(desks.iter().map(|d| format!("{}: {} walls", d.name, d.dcscat.walls.len())).collect::<Vec<_>>().join(", "))
}

fn consistency(desks: &[Desk]) -> Outcome {
    let mut notes = vec![];
    for d in desks {
        let r = check_consistency(&d.inst.rs, &d.dcscat, H).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{}: {} failing loops", d.name, r.failures))?;
        let control = check_consistency(&d.inst.rs, &d.dcscat.without_imaginary(), H).map_err(|e| e.to_string())?;
        ensure(!control.passed(), || format!("{}: removing the limiting wall went unnoticed", d.name))?;
        notes.push(format!("{}: {} joints, control fails {}", d.name, r.faces.len(), control.failures));
    }
    Ok(notes.join(", "))
}

fn classification(desks: &[Desk]) -> Outcome {
    for d in desks {
        let normals: BTreeSet<&Root> = d.dcscat.walls.iter().map(|w| &w.normal).collect();
        ensure(normals.len() == d.dcscat.walls.len(), || format!("{}: two walls share a hyperplane", d.name))?;
        for w in &d.dcscat.walls {
            let c = classify_wall(&d.inst.rs, &d.inst.c, w);
            if height(&w.normal) == 1 {
                ensure(c.incoming, || format!("{}: initial wall {:?} is not incoming", d.name, w.normal))?;
            } else {
                ensure(!c.incoming && c.gregarious, || format!("{}: wall {:?} is {c:?}", d.name, w.normal))?;
            }
        }
    }
    Ok(String::new())
}

/// Positive roots of affine `A_2` up to height `h` as `alpha + m delta`, with the roots of the
/// tube through `(0,1,0)` other than `(0,1,0)` and `(1,0,1)` removed.
fn a22_ap_oracle(h: i64) -> BTreeSet<Root> {
    let finite = [[1, 0, 0], [0, 1, 0], [1, 1, 0]];
    let mut out = BTreeSet::new();
    for m in 0..=h {
        for a in finite {
            for sign in [1, -1] {
                let r: Root = (0..3).map(|i| sign * a[i] + m).collect();
                if r.iter().all(|&x| x >= 0) && height(&r) >= 1 && height(&r) <= h {
                    let tube = a == [0, 1, 0];
                    if !tube || r == vec![0, 1, 0] || r == vec![1, 0, 1] {
                        out.insert(r);
                    }
                }
            }
        }
    }
    out.insert(vec![1, 1, 1]);
    out
}

fn normal_sets(desks: &[Desk]) -> Outcome {
    let oracles: [BTreeSet<Root>; 2] = [
        [[1, 0], [0, 1], [1, 1], [2, 1], [1, 2], [3, 2], [2, 3]].iter().map(|r| r.to_vec()).collect(),
        a22_ap_oracle(H),
    ];
    for (d, oracle) in desks.iter().zip(oracles) {
        let got = d.dcscat.normals();
        let ap: BTreeSet<Root> = d.inst.ap_positive(H).into_iter().collect();
        ensure(got == ap, || format!("{}: normals {got:?} vs AP {ap:?}", d.name))?;
        ensure(ap == oracle, || format!("{}: AP {ap:?} vs oracle {oracle:?}", d.name))?;
    }
    Ok(String::new())
}

fn limiting_wall_geometry(desks: &[Desk]) -> Outcome {
    for d in desks {
        let (rs, c) = (&d.inst.rs, &d.inst.c);
        let dinf = d_inf_cone(&d.inst);
        let g = dinf.generators();
        ensure(g.lines.is_empty(), || format!("{}: limiting wall contains a line", d.name))?;
        let rays: BTreeSet<Vec<i64>> = g.rays.iter().map(|r| primitive(r)).collect();
        let images: BTreeSet<Vec<i64>> =
            d.inst.ts.xi.iter().map(|xi| primitive(&rs.weight_to_dual(&c.nu_int(rs, xi)))).collect();
        ensure(rays == images, || format!("{}: extreme rays {rays:?} vs images {images:?}", d.name))?;
        let half_xc: Vec<Q> = d.inst.ts.vectors.x_c.iter().map(|x| x * q_frac(1, 2)).collect();
        ensure(c.nu_int(rs, &d.inst.info.delta) == half_xc, || format!("{}: nu(delta) is not x_c / 2", d.name))?;
    }
    Ok(String::new())
}

fn compatibility(desks: &[Desk]) -> Outcome {
    let mut notes = vec![];
    for d in desks {
        let cm = Compatibility::new(&d.inst.rs, &d.inst.c, &d.inst.ts, 4);
        let ap = ap_c(&d.inst.rs, &d.inst.ts, 4);
        let roots: Vec<Root> = ap.iter().map(|a| a.root.clone()).collect();
        let bad = check_compat_axioms(&cm, &roots).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), || format!("{}: {bad:?}", d.name))?;
        let table = cm.table(&roots).map_err(|e| e.to_string())?;
        for i in 0..roots.len() {
            for j in 0..roots.len() {
                ensure((table[i][j] == 0) == (table[j][i] == 0), || {
                    format!("{}: compatibility of {:?}, {:?} is not symmetric", d.name, roots[i], roots[j])
                })?;
            }
            if matches!(ap[i].class, ApClass::TubeReal(_)) {
                ensure(table[i][i] == -1, || format!("{}: self-degree of {:?}", d.name, roots[i]))?;
            }
        }
        notes.push(format!("{}: {} roots", d.name, roots.len()));
    }
    Ok(notes.join(", "))
}

fn fan_coincidence() -> Outcome {
    let mut notes = vec![];
    for (b, h) in [(a11(), 5), (a22(), 4)] {
        let inst = AffineInstance::new(&exch(b.clone())).unwrap();
        let r = fans_compare(&inst, h, h, 6, 240, 2024).map_err(|e| e.to_string())?;
        let resolved = r.sample_pairs - r.unresolved_pairs;
        ensure(r.exact_discrepancies.is_empty(), || format!("{b:?}: {:?}", r.exact_discrepancies))?;
        ensure(r.probe_contradictions.is_empty(), || format!("{b:?}: {:?}", r.probe_contradictions))?;
        ensure(resolved >= 200, || format!("{b:?}: only {resolved} resolved pairs"))?;
        notes.push(format!("{resolved} pairs"));
    }
    Ok(notes.join(", "))
}

fn round_trips() -> Outcome {
    let mut notes = vec![];
    for (b, len) in [(a11(), 12), (a22(), 10)] {
        let inst = AffineInstance::new(&exch(b)).unwrap();
        let rs = &inst.rs;
        let cinv = inst.c.inverse();
        let fwd = ji_sortable_up_to_length(rs, &inst.c, len, 1 << 22).map_err(|e| e.to_string())?;
        let bwd = ji_sortable_up_to_length(rs, &cinv, len, 1 << 22).map_err(|e| e.to_string())?;
        let table = CutTable::default();
        let mut antipodal = 0;
        for family in [&fwd, &bwd] {
            for j in family.values() {
                let sh = shard_cone(rs, ShardMode::FromJI(&j.element), &table);
                let back = ji_of_shard(rs, &sh, j.element.len()).map_err(|e| e.to_string())?;
                ensure(back == j.element, || format!("round trip of {:?} gives {:?}", j.element.word(), back.word()))?;
            }
        }
        for (beta, j) in &fwd {
            if let Some(jp) = bwd.get(beta) {
                let a = shard_cone(rs, ShardMode::FromJI(&j.element), &table);
                let b = shard_cone(rs, ShardMode::FromJI(&jp.element), &table);
                ensure(a.cone.negated().same_set(&b.cone), || format!("shards for {beta:?} are not antipodal"))?;
                antipodal += 1;
            }
        }
        notes.push(format!("{}+{} elements, {antipodal} antipodal pairs", fwd.len(), bwd.len()));
    }
    Ok(notes.join(", "))
}

fn random_extended(rng: &mut ChaCha8Rng) -> ExtendedExchangeMatrix {
    let n = rng.gen_range(2..=5);
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let s = rng.gen_range(-2..=2);
            b[i][j] = s * d[j];
            b[j][i] = -s * d[i];
        }
    }
    let extra = (0..rng.gen_range(1..=3))
        .map(|_| (0..n).map(|_| q_frac(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect())
        .collect();
    ExtendedExchangeMatrix::new(exch(b), extra)
}

fn mutation_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let m = random_extended(&mut rng);
        let k = rng.gen_range(0..m.top.n);
        ensure(m.mutate(k).mutate(k) == m, || format!("mutation at {k} is not an involution on {m:?}"))?;
    }
    for b in [a11(), a22()] {
        let inst = AffineInstance::new(&exch(b.clone())).unwrap();
        let word = inst.c.order.clone();
        let fixed = ExtendedExchangeMatrix::new(inst.b.clone(), vec![]).mutate_along(&word);
        ensure(fixed.top == inst.b, || format!("{b:?}: mutation along the Coxeter word moves the matrix"))?;
        let bt = inst.b.transpose();
        for a in ap_c(&inst.rs, &inst.ts, 4) {
            let lhs = eta(&bt, &word, &inst.c.nu_int(&inst.rs, &a.root));
            let rhs = inst.c.nu_int(&inst.rs, &tau(&inst.rs, &inst.c, &a.root));
            ensure(lhs == rhs, || format!("{b:?}: eta and tau disagree on {:?}", a.root))?;
        }
    }
    Ok(String::new())
}

fn report(index: usize, name: &str, budget: Option<Duration>, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut result = run();
    let took = start.elapsed();
    if let (Ok(_), Some(b)) = (&result, budget) {
        if took > b {
            result = Err(format!("took longer than {b:?}"));
        }
    }
    match &result {
        Ok(note) if note.is_empty() => println!("criterion {index:>2} PASS {name} [{took:.2?}]"),
        Ok(note) => println!("criterion {index:>2} PASS {name} [{took:.2?}] {note}"),
        Err(e) => println!("criterion {index:>2} FAIL {name} [{took:.2?}] {e}"),
    }
    result.is_ok()
}

fn main() {
    // `cargo test -- <filter>` passes arguments; the suite always runs in full
    let mut ok = true;
    ok &= report(1, "rank-two limiting walls", Some(Duration::from_secs(10)), rank2_limits);
    let start = Instant::now();
    let desks = desks();
    let built = start.elapsed();
    ok &= report(2, "construction identity", Some(Duration::from_secs(60).saturating_sub(built)), || {
        construction_identity(&desks).map(|note| format!("{note}, built in {built:.2?}"))
    });
    ok &= report(3, "consistency", Some(Duration::from_secs(300)), || consistency(&desks));
    ok &= report(4, "wall classification", None, || classification(&desks));
    ok &= report(5, "normal sets", None, || normal_sets(&desks));
    ok &= report(6, "limiting wall geometry", None, || limiting_wall_geometry(&desks));
    ok &= report(7, "compatibility degree", None, || compatibility(&desks));
    ok &= report(8, "fan coincidence", Some(Duration::from_secs(600)), fan_coincidence);
    ok &= report(9, "sortable and shard round trips", None, round_trips);
    ok &= report(10, "mutation algebra", None, mutation_algebra);
    if !ok {
        std::process::exit(1);
    }
}
