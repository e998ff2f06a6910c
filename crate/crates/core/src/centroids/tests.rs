use super::*;
use crate::cost::{cost_le, Tolerance};
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn half() -> Ratio<u64> {
    Ratio::new(1, 2)
}

fn column(values: &[i64], weights: &[u64]) -> WeightedCluster {
    let rows: Vec<Vec<i64>> = values.iter().map(|&v| vec![v]).collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    WeightedCluster::from_rows(&refs, weights).unwrap()
}

#[test]
fn l1_examples() {
    let (c, cost) = centroid_l1(&column(&[2, 3, 6, 8], &[1, 1, 1, 1]));
    assert_eq!(c, Centroid::from_i64(&[3]));
    assert_eq!(cost, CostValue::int(9));
    let (c, cost) = centroid_l1(&column(&[5], &[7]));
    assert_eq!(c, Centroid::from_i64(&[5]));
    assert!(cost.is_zero());
    let (c, cost) = centroid_l1(&column(&[0, 10], &[3, 1]));
    assert_eq!(c, Centroid::from_i64(&[0]));
    assert_eq!(cost, CostValue::int(10));
}

#[test]
fn lp01_examples() {
    let (c, cost) = centroid_lp01(&column(&[2, 3, 6, 8], &[1, 1, 1, 1]), half());
    assert_eq!(c, Centroid::from_i64(&[3]));
    let expected = 1.0 + 3f64.sqrt() + 5f64.sqrt();
    assert!((cost.to_f64() - expected).abs() < 1e-12);
    let (c, cost) = centroid_lp01(&column(&[4, 4], &[1, 2]), half());
    assert_eq!(c, Centroid::from_i64(&[4]));
    assert!(cost.is_zero());
    let (c, cost) = centroid_lp01(&column(&[0, 1], &[1, 1]), half());
    assert_eq!(c, Centroid::from_i64(&[0]));
    assert_eq!(cost, CostValue::int(1));
}

#[test]
fn l2_examples() {
    let cluster = WeightedCluster::from_rows(&[&[0, 0], &[2, 0], &[1, 3]], &[1, 1, 1]).unwrap();
    let (c, cost) = centroid_l2(&cluster);
    assert_eq!(c, Centroid::from_i64(&[1, 1]));
    assert_eq!(cost, CostValue::int(8));
    let (c, cost) = centroid_l2(&column(&[0, 1], &[1, 2]));
    assert_eq!(c, Centroid::from_ratios(&[(2, 3)]));
    assert_eq!(cost, CostValue::ratio(2, 3));
}

#[test]
fn l0_examples() {
    let (c, cost) = centroid_l0(&column(&[1, 1, 2], &[1, 1, 1]));
    assert_eq!(c, Centroid::from_i64(&[1]));
    assert_eq!(cost, CostValue::int(1));
    let (c, _) = centroid_l0(&column(&[2, 1], &[1, 1]));
    assert_eq!(c, Centroid::from_i64(&[1]));
    // Clique cluster of the Hamming reduction on the four-vertex example graph.
    let cluster = WeightedCluster::from_rows(&[&[1, 2, 12], &[1, 14, 4], &[28, 2, 4]], &[1, 1, 1]).unwrap();
    let (c, cost) = centroid_l0(&cluster);
    assert_eq!(c, Centroid::from_i64(&[1, 2, 4]));
    assert_eq!(cost, CostValue::int(3));
}

#[test]
fn linf_examples() {
    let pair = WeightedCluster::from_rows(&[&[0, -2, 0, -2, 0], &[0, 0, -2, 0, -2]], &[1, 1]).unwrap();
    let (c, cost) = centroid_linf_lp(&pair);
    assert_eq!(cost, CostValue::int(2));
    assert_eq!(cluster_cost(&DistanceOrder::LInf, &pair, &c).unwrap(), CostValue::int(2));
    assert_eq!(centroid_linf_grid(&pair, 1 << 20).unwrap().1, CostValue::int(2));

    let single = column(&[4], &[3]);
    assert!(centroid_linf_lp(&single).1.is_zero());
    assert!(centroid_linf_grid(&single, 10).unwrap().1.is_zero());

    let line = column(&[0, 3], &[1, 1]);
    assert_eq!(centroid_linf_lp(&line).1, CostValue::int(3));

    let diagonal = WeightedCluster::from_rows(&[&[0, 0], &[1, 1]], &[1, 1]).unwrap();
    let (c, cost) = centroid_linf_grid(&diagonal, 100).unwrap();
    assert_eq!(cost, CostValue::int(1));
    assert_eq!(c, Centroid::from_ratios(&[(0, 1), (0, 1)]));
    assert_eq!(centroid_linf_lp(&diagonal).1, CostValue::int(1));
}

#[test]
fn linf_grid_cap() {
    let wide = WeightedCluster::from_rows(&[&[0, 0, 0], &[100, 100, 100]], &[1, 1]).unwrap();
    assert!(matches!(centroid_linf_grid(&wide, 1000), Err(Error::CapExceeded { .. })));
}

#[test]
fn linf_weights_pull_the_centroid() {
    let cluster = column(&[0, 4], &[3, 1]);
    let (c, cost) = centroid_linf_lp(&cluster);
    assert_eq!(c, Centroid::from_i64(&[0]));
    assert_eq!(cost, CostValue::int(4));
}

#[test]
fn binary_coordinate_examples() {
    let close = |r: &Real, v: f64| (r.to_f64() - v).abs() < 1e-15;
    let (c, f) = binary_coordinate_cost(1, 2, Ratio::from_integer(2), 30).unwrap();
    assert!(close(&c, 2.0 / 3.0) && close(&f, 2.0 / 3.0));
    let (c, f) = binary_coordinate_cost(1, 1, Ratio::from_integer(2), 30).unwrap();
    assert!(close(&c, 0.5) && close(&f, 0.5));
    let (c, f) = binary_coordinate_cost(1, 1, Ratio::from_integer(3), 30).unwrap();
    assert!(close(&c, 0.5) && close(&f, 0.25));
    let (c, f) = binary_coordinate_cost(0, 3, Ratio::from_integer(2), 30).unwrap();
    assert!(close(&c, 1.0) && f.is_zero());
    assert!(binary_coordinate_cost(1, 1, Ratio::one(), 30).is_err());
}

#[test]
fn dispatcher_matches_specialised() {
    let cluster = WeightedCluster::from_rows(&[&[0, 1], &[2, 2], &[3, 0]], &[1, 2, 1]).unwrap();
    assert_eq!(optimal_centroid(&DistanceOrder::l1(), &cluster), centroid_l1(&cluster));
    assert_eq!(optimal_centroid(&DistanceOrder::L0, &cluster), centroid_l0(&cluster));
    assert_eq!(optimal_centroid(&DistanceOrder::L2, &cluster), centroid_l2(&cluster));
}

#[test]
fn rejects_bad_clusters() {
    assert!(WeightedCluster::unit(vec![]).is_err());
    assert!(WeightedCluster::from_rows(&[&[1], &[1, 2]], &[1, 1]).is_err());
    assert!(WeightedCluster::from_rows(&[&[1]], &[0]).is_err());
}

fn l1_column_cost(values: &[(i64, u64)], z: &BigRational) -> BigRational {
    values
        .iter()
        .map(|&(x, w)| (BigRational::from_integer(x.into()) - z).abs() * BigRational::from_integer(w.into()))
        .sum()
}

fn weighted_column() -> impl Strategy<Value = Vec<(i64, u64)>> {
    prop::collection::vec((0i64..=10, 1u64..=4), 1..=8)
}

fn to_cluster(values: &[(i64, u64)]) -> WeightedCluster {
    let (xs, ws): (Vec<i64>, Vec<u64>) = values.iter().copied().unzip();
    column(&xs, &ws)
}

proptest! {
    #[test]
    fn median_is_grid_optimal(values in weighted_column()) {
        let (_, cost) = centroid_l1(&to_cluster(&values));
        let cost = cost.to_ratio().unwrap();
        for step in -8..=88 {
            let z = ratio(step, 8);
            prop_assert!(cost <= l1_column_cost(&values, &z));
        }
    }

    #[test]
    fn present_value_is_grid_optimal(values in weighted_column()) {
        let (_, cost) = centroid_lp01(&to_cluster(&values), half());
        let lo = values.iter().map(|v| v.0).min().unwrap() as f64;
        let hi = values.iter().map(|v| v.0).max().unwrap() as f64;
        for step in 0..=200 {
            let z = lo + (hi - lo) * step as f64 / 200.0;
            let f: f64 = values.iter().map(|&(x, w)| w as f64 * (x as f64 - z).abs().sqrt()).sum();
            prop_assert!(cost.to_f64() <= f + 1e-9);
        }
    }

    #[test]
    fn linf_program_matches_grid(
        rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 1..=5),
        weights in prop::collection::vec(1u64..=3, 5),
    ) {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let cluster = WeightedCluster::from_rows(&refs, &weights[..rows.len()]).unwrap();
        let (c, lp) = centroid_linf_lp(&cluster);
        let (_, grid) = centroid_linf_grid(&cluster, 1 << 20).unwrap();
        prop_assert!(c.is_half_integral());
        prop_assert_eq!(lp.to_ratio(), grid.to_ratio());
    }

    #[test]
    fn mean_beats_perturbations(
        rows in prop::collection::vec(prop::collection::vec(0i64..=4, 2), 1..=5),
    ) {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let cluster = WeightedCluster::from_rows(&refs, &vec![1; rows.len()]).unwrap();
        let (c, cost) = centroid_l2(&cluster);
        let eps = ratio(1, 16);
        for i in 0..2 {
            for sign in [-1i64, 1] {
                let mut coords = c.coords().to_vec();
                coords[i] += &eps * BigRational::from_integer(sign.into());
                let other = cluster_cost(&DistanceOrder::L2, &cluster, &Centroid::new(coords)).unwrap();
                prop_assert!(cost_le(&cost, &other, &Tolerance::default()));
            }
        }
    }
}

#[test]
fn pairwise_cover_matches_simplex() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for _ in 0..400 {
        let n = rng.random_range(1..=7);
        let d = rng.random_range(1..=4);
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| rng.random_range(-4..=4)).collect()).collect();
        let weights: Vec<u64> = (0..n).map(|_| rng.random_range(1..=3)).collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let cluster = WeightedCluster::from_rows(&refs, &weights).unwrap();
        let gaps: Vec<Vec<i128>> = rows
            .iter()
            .map(|a| {
                rows.iter().map(|b| a.iter().zip(b).map(|(x, y)| i128::from((x - y).abs())).max().unwrap()).collect()
            })
            .collect();
        let w: Vec<i128> = weights.iter().map(|&x| i128::from(x)).collect();
        let doubled = pairwise_cover_doubled(&w, &gaps);
        let (_, cost) = centroid_linf_lp(&cluster);
        assert_eq!(cost, CostValue::halves(doubled as u64), "rows {rows:?} weights {weights:?}");
    }
}
