//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use wallcross_cli::{parse_input, run, Command, RunOptions};
use wallcross_core::datasets;
use wallcross_core::eqk::{determinant, verify_relations, scalar_order};
use wallcross_core::fgab::{gale_dual, hermite_rows};
use wallcross_core::fmk::{
    fm_images, fm_matrix, fm_transform, fm_transform_lift, galois_invariant, monodromy, CaseTag,
    Oracle,
};
use wallcross_core::gitchambers::{
    angle_contains, anticone_set, tilde_data, trivial_crossing, wall_crossing,
};
use wallcross_core::ifun::{
    brute_force_count, chart_transition, enumerate_degrees, hyperg_factor, i_series, matching_points,
    monomial, restrict_term, SectorSign,
};
use wallcross_core::stackgeom::{fixed_points_of, hypertoric_ideal, reconstruct_beta};
use wallcross_core::{subset, CrossingContext, GitData, InertiaPoint, KContext, Side, StabilityVector};

type Q = BigRational;
type Criterion = fn() -> Result<(), String>;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn s(labels: &[usize]) -> u32 {
    subset::from_indices(&labels.iter().map(|l| l - 1).collect::<Vec<_>>())
}

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn context(c: &datasets::Crossing) -> CrossingContext {
    let wc = wall_crossing(&c.0, &c.1, &c.2).expect("adjacent chambers");
    CrossingContext::new(&wc).expect("crossing context")
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn golden(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).expect("golden exists")).expect("golden parses")
}

fn criterion_1() -> Result<(), String> {
    let (g, tp, tm) = datasets::tstar_p12();
    let ap = anticone_set(&g, &tp).map_err(|e| e.to_string())?;
    let am = anticone_set(&g, &tm).map_err(|e| e.to_string())?;
    ensure(ap.minimal == vec![s(&[1]), s(&[2])], "plus anticones")?;
    ensure(am.minimal == vec![s(&[3]), s(&[4])], "minus anticones")?;
    for a in [&ap, &am] {
        let atlas = fixed_points_of(&g, a).map_err(|e| e.to_string())?;
        let orders: Vec<usize> = atlas.points.iter().map(|p| p.order()).collect();
        ensure(orders == vec![1, 2], "isotropy orders")?;
    }
    ensure(hypertoric_ideal(&g).format() == vec!["z1w1 + 2z2w2"], "hypertoric ideal")?;
    let wc = wall_crossing(&g, &tp, &tm).map_err(|e| e.to_string())?;
    ensure(wc.e == vec![BigInt::from(1)], "e = 1")?;
    ensure(wc.m_plus == s(&[1, 2]) && wc.m_minus == s(&[3, 4]), "M+ and M-")?;
    let t = tilde_data(&wc);
    let want: Vec<Vec<BigInt>> = [[1, -1], [2, -2], [-1, 0], [-2, 0], [0, 1]]
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    ensure(t.git.characters() == want.as_slice(), "tilde characters")?;
    // the command line reports match the bundled goldens
    let spec = parse_input(&fixtures().join("tstar_p12.json")).map_err(|e| e.to_string())?;
    for (cmd, name) in [
        (Command::Chambers, "chambers"),
        (Command::Wallcross, "wallcross"),
        (Command::Fan, "fan"),
        (Command::FixedPoints, "fixed-points"),
    ] {
        let out = run(cmd, &spec, &RunOptions::default()).map_err(|e| e.to_string())?;
        ensure(out.report == golden(&format!("tstar_p12.{name}.json")), name)?;
    }
    Ok(())
}

fn criterion_2() -> Result<(), String> {
    let ctx = context(&datasets::tstar_p12());
    let p = &ctx.plus;
    let one = p.one();
    let f1 = one.sub(&p.s(3)).unwrap();
    let f2 = one.sub(&p.s(2).mul(&p.s(0)).unwrap()).unwrap();
    let f3 = one.sub(&p.s(2).mul(&p.s(2)).unwrap().mul(&p.s(1)).unwrap()).unwrap();
    let expect = f1.mul(&f2).unwrap().mul(&f3).unwrap();
    let idx = ctx
        .minus_basis
        .iter()
        .position(|b| ctx.minus.basis_label(b) == "{3}:(0)")
        .ok_or("basis element {3}:(0)")?;
    ensure(fm_transform(&ctx, idx).map_err(|e| e.to_string())? == expect, "image of e_{3},triv")?;
    let mat = fm_matrix(&ctx).map_err(|e| e.to_string())?;
    ensure(mat.size() == 3, "3x3 matrix")?;
    ensure(mat.determinant().is_some_and(|d| !d.is_zero()), "nonzero determinant")
}

fn galois_and_branches(c: &datasets::Crossing) -> Result<(), String> {
    let ctx = context(c);
    let images = fm_images(&ctx).map_err(|e| e.to_string())?;
    for (img, b) in images.iter().zip(&ctx.minus_basis) {
        ensure(galois_invariant(&ctx, img), "image in the unextended field")?;
        let rho = &ctx.minus.atlas.points[b.point].characters[b.character];
        let shifted = fm_transform_lift(&ctx, b.point, rho, 1).map_err(|e| e.to_string())?;
        ensure(&shifted == img, "branch shift changes the image")?;
    }
    Ok(())
}

fn criterion_3() -> Result<(), String> {
    let c = datasets::tstar_p12();
    let ctx = context(&c);
    let p4 = ctx.minus.atlas.find(s(&[4])).ok_or("point {4}")?;
    ensure(ctx.cases[p4] == CaseTag::Flopped { j: 3, l: 2 }, "{4} flops with l = 2")?;
    galois_and_branches(&c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = [false; 4];
    for _ in 0..8 {
        let n = rng.random_range(1..=2usize);
        let a: Vec<i64> = (0..n).map(|_| rng.random_range(1..=3)).collect();
        for &x in &a {
            seen[x as usize] = true;
        }
        galois_and_branches(&datasets::rank_one_lawrence(&a))?;
    }
    ensure(seen[1] && seen[2] && seen[3], "l = 1, 2, 3 all sampled")
}

fn criterion_4() -> Result<(), String> {
    for c in [datasets::atiyah(), datasets::rank2_flop()] {
        let ctx = context(&c);
        let oracle = Oracle::new(&ctx).map_err(|e| e.to_string())?;
        for (k, b) in ctx.minus_basis.iter().enumerate() {
            let lhs = fm_transform(&ctx, k).map_err(|e| e.to_string())?;
            let rhs = oracle.apply(&ctx, &b.class).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, "transform against oracle")?;
        }
    }
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    for (g, tp, tm) in datasets::bundled() {
        for t in [&tp, &tm] {
            let a = anticone_set(&g, t).map_err(|e| e.to_string())?;
            let atlas = fixed_points_of(&g, &a).map_err(|e| e.to_string())?;
            let m = scalar_order(&[&atlas], &[]);
            let ctx = KContext::from_anticones(&g, a, Side::Plus, m).map_err(|e| e.to_string())?;
            let rel = verify_relations(&ctx);
            ensure(rel.pair_relations, "R_i R_(n+i) = hbar")?;
            ensure(rel.koszul_vanishing, "Koszul relations")?;
            let basis = ctx.structure_basis();
            for p in 0..ctx.atlas.points.len() {
                let block = ctx.restriction_block(&basis, p);
                ensure(determinant(&block).is_some_and(|d| !d.is_zero()), "block determinant")?;
                for b in basis.iter().filter(|b| b.point != p) {
                    for el in 0..ctx.atlas.points[p].order() {
                        let pos = ctx.position(InertiaPoint { point: p, element: el });
                        ensure(b.class.values[pos].is_zero(), "basis support")?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Result<(), String> {
    for c in [datasets::tstar_p12(), datasets::atiyah()] {
        let mono = monodromy(&context(&c)).map_err(|e| e.to_string())?;
        ensure(mono.determinant().is_some_and(|d| !d.is_zero()), "invertible")?;
        ensure(!mono.is_identity(), "nontrivial")?;
    }
    let (g, _, _) = datasets::rank2_flop();
    let wc = trivial_crossing(&g, &StabilityVector::from_i64(&[1, 2]), &StabilityVector::from_i64(&[2, 1]))
        .map_err(|e| e.to_string())?;
    ensure(wc.shared().len() == wc.minus.minimal.len(), "all anticones shared")?;
    let ctx = CrossingContext::new(&wc).map_err(|e| e.to_string())?;
    ensure(monodromy(&ctx).map_err(|e| e.to_string())?.is_identity(), "identity when shared")
}

fn criterion_7() -> Result<(), String> {
    let (g, tp, _) = datasets::tstar_p12();
    let series = i_series(&g, &tp, &q(2, 1), None, SectorSign::Minus).map_err(|e| e.to_string())?;
    let find = |d: Q| series.terms.iter().find(|t| t.degree.d == vec![d.clone()]).cloned();
    ensure(find(q(0, 1)).ok_or("d = 0")?.is_identity(), "d = 0 term is 1")?;
    let half = find(q(1, 2)).ok_or("d = 1/2")?;
    ensure(half.format() == "y^{1/2}·u4 / ((u1+1/2z)(u2+z))", "degree 1/2 term")?;
    ensure(half.sector.fractions == vec![q(1, 2), q(0, 1), q(1, 2), q(0, 1)], "degree 1/2 sector")?;
    let one = find(q(1, 1)).ok_or("d = 1")?;
    ensure(one.format() == "y·u3·u4·(u4-z) / ((u1+z)(u2+z)(u2+2z))", "degree 1 term")?;
    ensure(one.sector.is_untwisted(), "degree 1 sector")?;
    for den in 1..=4i64 {
        for n in -3 * den..=3 * den {
            let x = q(n, den);
            ensure(hyperg_factor(&x, 0).a_values.len() == brute_force_count(&x, 12), "telescoping count")?;
        }
    }
    let a = anticone_set(&g, &tp).map_err(|e| e.to_string())?;
    let atlas = fixed_points_of(&g, &a).map_err(|e| e.to_string())?;
    let minus_half = find(q(-1, 2)).ok_or("d = -1/2")?;
    let pts = matching_points(&g, &atlas, &minus_half);
    ensure(!pts.is_empty(), "degree -1/2 sector is carried")?;
    for ip in pts {
        let r = restrict_term(&g, &series, &minus_half, &atlas, ip).map_err(|e| e.to_string())?;
        ensure(r.is_zero(), "degree -1/2 restriction vanishes")?;
    }
    Ok(())
}

fn random_lawrence(rng: &mut ChaCha8Rng, r: usize, n: usize) -> GitData {
    let half: Vec<Vec<i64>> = (0..n).map(|_| (0..r).map(|_| rng.random_range(-2..=2)).collect()).collect();
    let mut rows = half.clone();
    rows.extend(half.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
    GitData::from_i64(r, n, &rows).expect("well formed")
}

fn random_theta(rng: &mut ChaCha8Rng, r: usize) -> StabilityVector {
    StabilityVector::from_i64(&(0..r).map(|_| rng.random_range(-7..=7)).collect::<Vec<_>>())
}

fn criterion_8() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut closures, mut walls) = (0, 0);
    for k in 0..80 {
        let r = 1 + k % 2;
        let n = 2 + k % 3;
        let g = random_lawrence(&mut rng, r, n);
        let tp = random_theta(&mut rng, r);
        let tm = random_theta(&mut rng, r);
        if let Ok(a) = anticone_set(&g, &tp) {
            let full = subset::full(g.num_chars());
            for set in 0..=full {
                let inside = a.contains(set);
                ensure(inside == angle_contains(&g, set, &tp), "membership against the cone test")?;
                if inside {
                    for i in 0..g.num_chars() {
                        ensure(a.contains(set | 1 << i), "upward closure")?;
                    }
                }
            }
            closures += 1;
        }
        if let Ok(wc) = wall_crossing(&g, &tp, &tm) {
            ensure(subset::size(wc.m_plus) == subset::size(wc.m_minus), "|M+| = |M-|")?;
            walls += 1;
        }
        let c = reconstruct_beta(&g);
        if let Ok(back) = gale_dual(&c.projection, &c.group) {
            ensure(back == hermite_rows(&g.d_matrix()), "Gale roundtrip")?;
        }
    }
    ensure(closures > 30 && walls > 5, "enough random samples")?;
    for (g, tp, tm) in datasets::bundled() {
        let wc = wall_crossing(&g, &tp, &tm).map_err(|e| e.to_string())?;
        ensure(subset::size(wc.m_plus) == subset::size(wc.m_minus), "|M+| = |M-| bundled")?;
        let c = reconstruct_beta(&g);
        let back = gale_dual(&c.projection, &c.group).map_err(|e| e.to_string())?;
        ensure(back == hermite_rows(&g.d_matrix()), "Gale roundtrip bundled")?;
        let ch = chart_transition(&wc).map_err(|e| e.to_string())?;
        for t in [&tp, &tm] {
            let a = anticone_set(&g, t).map_err(|e| e.to_string())?;
            for d in enumerate_degrees(&g, &a, &q(3, 1)) {
                let y = monomial(&ch.basis_plus, &d.d);
                let yt = monomial(&ch.basis_minus, &d.d);
                ensure(ch.pull_exponents(&yt) == y, "chart law")?;
            }
        }
    }
    let (g, tp, tm) = datasets::tstar_p12();
    let ch = chart_transition(&wall_crossing(&g, &tp, &tm).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(ch.c == q(1, 1) && ch.c_i.is_empty(), "T*P(1,2): c = 1")?;
    ensure(ch.pull_exponents(&[q(1, 1)]) == vec![q(-1, 1)], "T*P(1,2): y~ = 1/y")
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("T*P(1,2) worked example reproduced", criterion_1),
        ("FM image of e_{3},triv and invertible 3x3 matrix", criterion_2),
        ("Galois invariance and branch independence", criterion_3),
        ("localization oracle agrees on smooth data", criterion_4),
        ("ring relations and structure basis", criterion_5),
        ("monodromy nontrivial, identity when shared", criterion_6),
        ("I-function terms, telescoping, effective support", criterion_7),
        ("combinatorial invariants and chart law", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(()) => println!("criterion {}: PASS  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
