use proptest::prelude::*;
use tverberg::geom::rat;
use tverberg::kernel::{radon_partition, sparsify, ConvexCombination};
use tverberg::planar::{birch_partition, tukey_depth_2d};
use tverberg::random::{default_rounds, iterated_radon_centerpoint};
use tverberg::generate::{generate, Family};
use tverberg::{verify_site, Point, PointSet, Site};

fn int_points(d: usize, lo: usize, hi: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-50i64..=50, d), lo..=hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verification_ignores_batch_order(pts in int_points(2, 3, 40), rot in 0usize..40) {
        let set = PointSet::from_ints(&pts).unwrap();
        let site = birch_partition(&set).unwrap();
        prop_assert!(verify_site(&set, &site).valid);
        let mut batches = site.log.batches.clone();
        if !batches.is_empty() {
            let k = rot % batches.len();
            batches.rotate_left(k);
        }
        batches.reverse();
        let shuffled = Site::new(site.point.clone(), batches, site.unused.clone());
        let report = verify_site(&set, &shuffled);
        prop_assert!(report.valid);
        prop_assert_eq!(report.rank, site.rank());
    }

    #[test]
    fn nudged_weight_is_rejected(pts in int_points(2, 3, 30), which in 0usize..30) {
        let set = PointSet::from_ints(&pts).unwrap();
        let mut site = birch_partition(&set).unwrap();
        let b = which % site.rank();
        let (&i, _) = site.log.batches[b].witness.weights.iter().next().unwrap();
        *site.log.batches[b].witness.weights.get_mut(&i).unwrap() += rat(1, 1_000_000);
        prop_assert!(!verify_site(&set, &site).valid);
    }

    #[test]
    fn radon_point_lies_in_both_hulls(pts in int_points(3, 5, 5)) {
        let points: Vec<Point> = pts.iter().map(|p| Point::from_ints(p)).collect();
        let set = PointSet::new(points.clone()).unwrap();
        let r = radon_partition(&points).unwrap();
        prop_assert_eq!(r.side_a.len() + r.side_b.len(), 5);
        for side in [&r.weights_a, &r.weights_b] {
            if side.is_empty() {
                continue;
            }
            let comb = ConvexCombination::from_weights(side.iter().map(|(&i, w)| (i, w.clone())), &set);
            prop_assert_eq!(&comb.target, &r.point);
            prop_assert!(comb.violations(&set).is_empty());
        }
    }

    #[test]
    fn sparsify_keeps_target(pts in int_points(2, 4, 25), raw in prop::collection::vec(1i64..20, 25)) {
        let set = PointSet::from_ints(&pts).unwrap();
        let total: i64 = raw.iter().take(set.len()).sum();
        let comb = ConvexCombination::from_weights((0..set.len()).map(|i| (i, rat(raw[i], total))), &set);
        let sparse = sparsify(&comb, &set);
        prop_assert!(sparse.support_len() <= 3);
        prop_assert_eq!(&sparse.target, &comb.target);
        prop_assert!(sparse.violations(&set).is_empty());
    }
}

#[test]
fn iterated_radon_is_usually_deep() {
    let n = 500;
    let mut deep = 0;
    for seed in 0..100 {
        let set = generate(Family::Uniform, n, 2, 900 + seed).unwrap();
        let c = iterated_radon_centerpoint(&set, seed, default_rounds(n, 2)).unwrap();
        if 8 * tukey_depth_2d(&set, &c).unwrap().depth >= n {
            deep += 1;
        }
    }
    assert!(deep >= 90, "only {deep}/100 centers reached depth n/8");
}
