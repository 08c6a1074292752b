use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use jlt_core::streaming::{sketch_merge, topk_process, AmsSketch, CountSketch, Sketch, TurnstileUpdate};
use jlt_core::JlError;

fn random_stream(seed: u64, d: u64, len: usize) -> Vec<TurnstileUpdate> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| TurnstileUpdate::new(r.random_range(0..d), r.random_range(-9..=9))).collect()
}

fn exact_f2(stream: &[TurnstileUpdate], d: usize) -> f64 {
    let mut x = vec![0i64; d];
    stream.iter().for_each(|u| x[u.index as usize] += u.value);
    x.iter().map(|&v| (v * v) as f64).sum()
}

#[test]
fn ams_linearity_checks() {
    let mut a = AmsSketch::new(50, 0.5, 0.3, 1).unwrap();
    a.update(TurnstileUpdate::new(3, 2)).unwrap();
    a.update(TurnstileUpdate::new(3, 3)).unwrap();
    let mut b = AmsSketch::new(50, 0.5, 0.3, 1).unwrap();
    b.update(TurnstileUpdate::new(3, 5)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.f2_query(), 25.0);
}

#[test]
fn interleaving_does_not_change_state() {
    let stream = random_stream(5, 300, 4000);
    let mut fwd = CountSketch::new(300, 0.2, 0.05, 9).unwrap();
    let mut rev = fwd.clone();
    fwd.update_all(stream.iter().copied()).unwrap();
    rev.update_all(stream.iter().rev().copied()).unwrap();
    assert_eq!(fwd.table(), rev.table());
}

#[test]
fn merge_identity_and_mismatch() {
    let stream = random_stream(6, 100, 500);
    let mut s = AmsSketch::new(100, 0.5, 0.1, 3).unwrap();
    s.update_all(stream).unwrap();
    let empty = AmsSketch::new(100, 0.5, 0.1, 3).unwrap();
    assert_eq!(sketch_merge(&s, &empty).unwrap(), s);
    let other_seed = AmsSketch::new(100, 0.5, 0.1, 4).unwrap();
    assert!(matches!(s.clone().merge(&other_seed), Err(JlError::IncompatibleSketch(_))));
    let other_width = AmsSketch::new(100, 0.4, 0.1, 3).unwrap();
    assert!(s.clone().merge(&other_width).is_err());
    let cs = CountSketch::new(100, 0.5, 0.1, 3).unwrap();
    assert!(cs.clone().merge(&CountSketch::new(101, 0.5, 0.1, 3).unwrap()).is_err());
}

#[test]
fn count_sketch_touches_k_buckets_per_update() {
    let mut s = CountSketch::new(1 << 20, 0.1, 0.01, 2).unwrap();
    let k = s.shape().reps;
    for i in 0..50u64 {
        let before = s.table().to_vec();
        s.update(TurnstileUpdate::new(i * 7777, 1)).unwrap();
        let changed = s.table().iter().zip(&before).filter(|(a, b)| a != b).count();
        assert_eq!(changed, k);
    }
}

#[test]
fn separated_items_query_exactly() {
    let s = CountSketch::new(10_000, 0.25, 0.05, 11).unwrap();
    let k = s.shape().reps;
    let (i, j) = (1u64..10_000)
        .flat_map(|i| (i + 1..i + 200).map(move |j| (i, j)))
        .find(|&(i, j)| (0..k).all(|r| s.bucket(r, i) != s.bucket(r, j)))
        .unwrap();
    let mut s = s;
    s.update(TurnstileUpdate::new(i, 4)).unwrap();
    s.update(TurnstileUpdate::new(j, -9)).unwrap();
    assert_eq!(s.point_query(i).unwrap(), 4.0);
    assert_eq!(s.point_query(j).unwrap(), -9.0);
}

#[test]
fn single_repetition_estimates_are_unbiased() {
    let stream = random_stream(12, 64, 300);
    let f2 = exact_f2(&stream, 64);
    let seeds = 10_000u64;
    let (mut ams, mut cs) = (0.0, 0.0);
    for seed in 0..seeds {
        let mut a = AmsSketch::new(64, 0.5, 0.3, seed).unwrap();
        let mut c = CountSketch::new(64, 0.5, 0.3, seed).unwrap();
        a.update_all(stream.iter().copied()).unwrap();
        c.update_all(stream.iter().copied()).unwrap();
        ams += a.repetition_estimates()[0];
        cs += c.repetition_estimates()[0];
    }
    let (ams, cs) = (ams / seeds as f64, cs / seeds as f64);
    assert!((ams / f2 - 1.0).abs() <= 0.02, "AMS mean {ams} vs {f2}");
    assert!((cs / f2 - 1.0).abs() <= 0.02, "CS mean {cs} vs {f2}");
}

#[test]
fn ams_f2_interval() {
    // ‖x‖² = 100 via four coordinates of 5
    let stream: Vec<TurnstileUpdate> = [10u64, 20, 30, 40]
        .iter()
        .flat_map(|&i| [TurnstileUpdate::new(i, 2), TurnstileUpdate::new(i, 3)])
        .collect();
    let inside = (0..200u64)
        .filter(|&seed| {
            let mut a = AmsSketch::new(100, 0.25, 0.05, seed).unwrap();
            a.update_all(stream.iter().copied()).unwrap();
            (75.0..=125.0).contains(&a.f2_query())
        })
        .count();
    assert!(inside >= 190, "{inside}/200");
}

#[test]
fn median_is_a_repetition_value() {
    let mut s = CountSketch::new(500, 0.3, 0.05, 4).unwrap();
    s.update_all(random_stream(2, 500, 2000)).unwrap();
    assert!(s.repetition_estimates().contains(&s.f2_query()));
}

#[test]
fn heavy_hitters_on_zipf() {
    let (d, k, eps, delta) = (10_000usize, 10usize, 0.1, 0.05);
    let zipf = Zipf::new(d as f64, 1.2).unwrap();
    let need = ((1.0 - eps) * k as f64).ceil() as usize;
    let mut good = 0;
    for run in 0..100u64 {
        let mut r = ChaCha8Rng::seed_from_u64(0x2F00 + run);
        let stream: Vec<TurnstileUpdate> =
            (0..1_000_000).map(|_| TurnstileUpdate::new(zipf.sample(&mut r) as u64 - 1, 1)).collect();
        let mut counts = vec![0u64; d];
        stream.iter().for_each(|u| counts[u.index as usize] += 1);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(counts[i]), i));
        let heap = topk_process(stream, k, eps, delta, d as u64, run).unwrap();
        let top_ok = order[..need].iter().all(|&i| heap.contains(i as u64));
        let kth = counts[order[k - 1]] as f64;
        let members_ok = heap.items().iter().all(|&(i, _)| counts[i as usize] as f64 > (1.0 - eps) * kth);
        good += (top_ok && members_ok) as usize;
    }
    assert!(good >= 95, "{good}/100");
}
