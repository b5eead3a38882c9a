//! End-to-end runs of the public API on bundled and random data.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use wallcross_core::datasets;
use wallcross_core::fgab::smith_normal_form;
use wallcross_core::fmk::{fm_matrix, monodromy, reverse_context};
use wallcross_core::gitchambers::wall_crossing;
use wallcross_core::stackgeom::fixed_points;
use wallcross_core::{CrossingContext, IntMatrix};

#[test]
fn tstar_p13_sizes() {
    let (g, tp, tm) = datasets::tstar_p13();
    for t in [&tp, &tm] {
        let atlas = fixed_points(&g, t).unwrap();
        let orders: Vec<usize> = atlas.points.iter().map(|p| p.order()).collect();
        assert_eq!(orders, vec![1, 3]);
        assert_eq!(atlas.total_size(), 4);
    }
    let wc = wall_crossing(&g, &tp, &tm).unwrap();
    let ctx = CrossingContext::new(&wc).unwrap();
    let m = fm_matrix(&ctx).unwrap();
    assert_eq!(m.size(), 4);
    assert!(m.determinant().is_some_and(|d| !d.is_zero()));
}

#[test]
fn both_directions_invertible_on_bundled_data() {
    for (g, tp, tm) in datasets::bundled() {
        let wc = wall_crossing(&g, &tp, &tm).unwrap();
        let ctx = CrossingContext::new(&wc).unwrap();
        let back = reverse_context(&ctx).unwrap();
        for c in [&ctx, &back] {
            assert!(fm_matrix(c).unwrap().determinant().is_some_and(|d| !d.is_zero()));
        }
        let mono = monodromy(&ctx).unwrap();
        assert_eq!(mono.size(), ctx.plus_basis.len());
    }
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-6i64..=6, rows * cols).prop_map(move |v| {
        let rows: Vec<Vec<BigInt>> = v.chunks(cols).map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        IntMatrix::from_rows(&rows, cols)
    })
}

proptest! {
    #[test]
    fn smith_form_factors(a in (1usize..4, 1usize..4).prop_flat_map(|(r, c)| matrix(r, c))) {
        let d = smith_normal_form(&a);
        prop_assert_eq!(d.u.mul(&d.s).mul(&d.v), a.clone());
        prop_assert_eq!(d.p.mul(&a).mul(&d.q), d.s.clone());
        prop_assert_eq!(d.p.mul(&d.u), IntMatrix::identity(a.rows()));
        prop_assert_eq!(d.q.mul(&d.v), IntMatrix::identity(a.cols()));
        let diag: Vec<BigInt> = (0..a.rows().min(a.cols())).map(|i| d.s[(i, i)].clone()).collect();
        for w in diag.windows(2) {
            prop_assert!(w[0] >= BigInt::zero());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        let unit = diag.iter().filter(|x| x.is_one()).count();
        prop_assert!(unit <= d.rank());
    }
}
