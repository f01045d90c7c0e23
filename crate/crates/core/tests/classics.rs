use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

use gclwb::calc::poly::Poly;
use gclwb::classics::*;

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

// ---- shortest paths ----

fn bellman_ford(g: &Graph, s: usize) -> Vec<Option<BigRational>> {
    let mut dist = vec![None; g.len()];
    dist[s] = Some(r(0));
    for _ in 0..g.len() {
        let mut changed = false;
        for e in &g.edges {
            let mut relax = |a: usize, b: usize| {
                if let Some(da) = dist[a].clone() {
                    let nd = da + &e.weight;
                    if dist[b].as_ref().is_none_or(|old: &BigRational| nd < *old) {
                        dist[b] = Some(nd);
                        changed = true;
                    }
                }
            };
            relax(e.from, e.to);
            if !g.directed {
                relax(e.to, e.from);
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

fn path_weight(g: &Graph, path: &[usize]) -> BigRational {
    path.windows(2)
        .map(|w| {
            g.edges
                .iter()
                .filter(|e| (e.from, e.to) == (w[0], w[1]) || (!g.directed && (e.to, e.from) == (w[0], w[1])))
                .map(|e| e.weight.clone())
                .min()
                .expect("path uses an edge")
        })
        .fold(r(0), |a, b| a + b)
}

#[test]
fn sssp_small_cases() {
    let g = Graph::with_vertices(1, false);
    assert_eq!(shortest_paths(&g, 0).unwrap().dist, vec![Some(r(0))]);

    let g = Graph::parse_tsv("directed: false\nA\tB\t1\nB\tC\t1\nA\tC\t3\n").unwrap();
    let sp = shortest_paths_from(&g, "A").unwrap();
    let c = g.vertex("C").unwrap();
    assert_eq!(sp.dist[c], Some(r(2)));
    let names: Vec<&str> = sp.path(c).unwrap().iter().map(|&v| g.names[v].as_str()).collect();
    assert_eq!(names, ["A", "B", "C"]);
    assert_eq!(bellman_ford(&g, 0), sp.dist);
}

#[test]
fn sssp_rejects_bad_input() {
    let mut g = Graph::with_vertices(2, true);
    assert!(matches!(g.add_edge(0, 1, r(-1)), Err(GraphError::NegativeWeight { .. })));
    assert!(matches!(g.add_edge(0, 5, r(1)), Err(GraphError::NoSuchVertex(5))));
    assert!(Graph::parse_tsv("directed: false\nA\tB\t-2\n").is_err());
    assert!(Graph::parse_tsv("A\tB\t2\n").is_err());
    assert!(Graph::parse_tsv("directed: true\nA\tB\n").is_err());
    assert!(Graph::parse_tsv("directed: true\nA\tB\t1/0\n").is_err());
    assert!(shortest_paths_from(&g, "Z").is_err());
}

#[test]
fn sssp_fractional_weights_and_unreachable() {
    let g = Graph::parse_tsv("directed: true\n# comment\na\tb\t1/3\nb\tc\t1/6\na\tc\t1\nd\ta\t0\n").unwrap();
    let sp = shortest_paths_from(&g, "a").unwrap();
    assert_eq!(sp.dist[g.vertex("c").unwrap()], Some(BigRational::new(1.into(), 2.into())));
    assert_eq!(sp.dist[g.vertex("d").unwrap()], None);
    assert_eq!(sp.path(g.vertex("d").unwrap()), None);
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Graph {
    let mut g = Graph::with_vertices(n, rng.random_bool(0.5));
    for _ in 0..m {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        let w = BigRational::new(rng.random_range(0..50i64).into(), rng.random_range(1..4i64).into());
        g.add_edge(a, b, w).unwrap();
    }
    g
}

#[test]
fn sssp_matches_bellman_ford_on_random_graphs() {
    for seed in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.random_range(50..400);
        let g = random_graph(&mut rng, 100, m);
        let s = rng.random_range(0..100);
        let sp = shortest_paths(&g, s).unwrap();
        assert_eq!(sp.dist, bellman_ford(&g, s), "seed {seed}");
        for v in 0..g.len() {
            if let Some(path) = sp.path(v) {
                assert_eq!(path[0], s);
                assert_eq!(Some(path_weight(&g, &path)), sp.dist[v]);
            }
        }
    }
}

// ---- banker ----

/// Backtracking over completion orders.
fn some_order_completes(cash: u64, loans: &[u64], claims: &[u64], done: &mut [bool]) -> bool {
    if done.iter().all(|&d| d) {
        return true;
    }
    for c in 0..loans.len() {
        if !done[c] && claims[c] - loans[c] <= cash {
            done[c] = true;
            let ok = some_order_completes(cash + loans[c], loans, claims, done);
            done[c] = false;
            if ok {
                return true;
            }
        }
    }
    false
}

fn order_completes(b: &BankerState, order: &[usize]) -> bool {
    let mut sorted = order.to_vec();
    sorted.sort();
    if sorted != (0..b.loans().len()).collect::<Vec<_>>() {
        return false;
    }
    let mut cash = b.cash();
    for &c in order {
        if b.need(c) > cash {
            return false;
        }
        cash += b.loans()[c];
    }
    true
}

fn oracle_agrees(b: &BankerState) -> bool {
    let expected = some_order_completes(b.cash(), b.loans(), b.claims(), &mut vec![false; b.loans().len()]);
    match b.is_safe() {
        BankerVerdict::Safe(order) => expected && order_completes(b, &order),
        BankerVerdict::Unsafe => !expected,
    }
}

#[test]
fn banker_examples() {
    let b = BankerState::new(10, vec![0, 0, 0], vec![10, 3, 7]).unwrap();
    assert!(b.is_safe().is_safe());
    let b = BankerState::new(10, vec![4, 4], vec![8, 8]).unwrap();
    assert_eq!(b.is_safe(), BankerVerdict::Unsafe);
    let b = BankerState::new(10, vec![4, 4], vec![8, 6]).unwrap();
    assert_eq!(b.is_safe(), BankerVerdict::Safe(vec![1, 0]));
}

#[test]
fn banker_requests() {
    let b = BankerState::new(10, vec![0, 0], vec![8, 8]).unwrap();
    let Request::Granted(b1) = b.request(0, 4).unwrap() else { panic!() };
    assert_eq!(b1.loans(), [4, 0]);
    assert_eq!(b1.request(1, 4).unwrap(), Request::Deferred);
    assert!(matches!(b1.request(1, 9), Err(BankerError::Malformed(_))));
    assert!(matches!(b1.request(1, 0), Err(BankerError::Malformed(_))));
    assert!(matches!(b1.request(2, 1), Err(BankerError::NoSuchCustomer(2))));
    let tight = BankerState::new(4, vec![3], vec![4]).unwrap();
    assert!(matches!(tight.request(0, 2), Err(BankerError::Malformed(_))));
    assert!(matches!(tight.request(0, 1), Ok(Request::Granted(_))));
}

#[test]
fn banker_rejects_bad_states() {
    assert!(matches!(BankerState::new(10, vec![1], vec![1, 2]), Err(BankerError::LengthMismatch { .. })));
    assert!(matches!(BankerState::new(10, vec![5], vec![4]), Err(BankerError::LoanExceedsClaim { .. })));
    assert!(matches!(BankerState::new(10, vec![0], vec![11]), Err(BankerError::ClaimExceedsCapital { .. })));
    assert!(matches!(BankerState::new(10, vec![6, 6], vec![8, 8]), Err(BankerError::Overdrawn { .. })));
}

/// Visit every multiset of `k` (loan, claim) pairs with total loan at most
/// `budget`; customer order does not affect safety.
fn multisets(
    pairs: &[(u64, u64)],
    k: usize,
    budget: u64,
    start: usize,
    cur: &mut Vec<(u64, u64)>,
    f: &mut dyn FnMut(&[(u64, u64)]),
) {
    if k == 0 {
        f(cur);
        return;
    }
    for i in start..pairs.len() {
        if pairs[i].0 <= budget {
            cur.push(pairs[i]);
            multisets(pairs, k - 1, budget - pairs[i].0, i, cur, f);
            cur.pop();
        }
    }
}

#[test]
fn banker_matches_exhaustive_oracle() {
    let jobs: Vec<(u64, usize, usize)> = (0..=12u64)
        .flat_map(|cap| {
            (1..=5).flat_map(move |k| (0..(cap as usize + 1) * (cap as usize + 2) / 2).map(move |i| (cap, k, i)))
        })
        .collect();
    let (count, bad) = jobs
        .par_iter()
        .map(|&(cap, k, first)| {
            let pairs: Vec<(u64, u64)> = (0..=cap).flat_map(|c| (0..=c).map(move |l| (l, c))).collect();
            let (mut count, mut bad) = (0u64, 0u64);
            let head = pairs[first];
            let mut cur = vec![head];
            multisets(&pairs, k - 1, cap - head.0, first, &mut cur, &mut |ps| {
                let b =
                    BankerState::new(cap, ps.iter().map(|p| p.0).collect(), ps.iter().map(|p| p.1).collect()).unwrap();
                count += 1;
                if !oracle_agrees(&b) {
                    bad += 1;
                }
            });
            (count, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    assert_eq!(count, 18_691_294);
    assert_eq!(bad, 0);
}

proptest! {
    #[test]
    fn banker_verdict_ignores_customer_order(
        cap in 0u64..20,
        raw in prop::collection::vec((0u64..20, 0u64..20), 1..7),
        seed in any::<u64>(),
    ) {
        let claims: Vec<u64> = raw.iter().map(|p| p.1 % (cap + 1)).collect();
        let mut left = cap;
        let loans: Vec<u64> = raw.iter().zip(&claims).map(|(p, &c)| {
            let l = (p.0 % (c + 1)).min(left);
            left -= l;
            l
        }).collect();
        let b = BankerState::new(cap, loans.clone(), claims.clone()).unwrap();
        prop_assert!(oracle_agrees(&b));
        let mut idx: Vec<usize> = (0..loans.len()).collect();
        rand::seq::SliceRandom::shuffle(&mut idx[..], &mut ChaCha8Rng::seed_from_u64(seed));
        let shuffled = BankerState::new(cap, idx.iter().map(|&i| loans[i]).collect(), idx.iter().map(|&i| claims[i]).collect()).unwrap();
        prop_assert_eq!(b.is_safe().is_safe(), shuffled.is_safe().is_safe());
    }
}

// ---- coins ----

fn tape(s: &str) -> BiasedCoin {
    BiasedCoin::parse_tape(s).unwrap()
}

#[test]
fn fair_bit_rules() {
    assert_eq!(fair_bit(&mut tape("HT")).unwrap(), Draw { value: 0, tosses: 2 });
    assert_eq!(fair_bit(&mut tape("H,H,T,H")).unwrap(), Draw { value: 1, tosses: 4 });
    assert_eq!(fair_bit(&mut tape("HHT")), Err(CoinError::TapeExhausted(3)));
    assert!(BiasedCoin::parse_tape("HX").is_err());
    assert!(BiasedCoin::seeded(0.0, 1).is_err());
    assert!(BiasedCoin::seeded(1.0, 1).is_err());
}

fn bits(word: u32, q: usize) -> Vec<bool> {
    (0..q).map(|i| word >> (q - 1 - i) & 1 == 1).collect()
}

fn word_tape(word: u32, q: usize) -> BiasedCoin {
    BiasedCoin::tape(bits(word, q).into_iter().map(|b| if b { Toss::H } else { Toss::T }).collect())
}

/// Probability of a word with `h` heads and `t` tails as a polynomial in p.
fn weight(h: usize, t: usize) -> Poly {
    let p = Poly::var("p");
    let q = &Poly::constant(BigRational::one()) - &p;
    &p.pow(h as u32) * &q.pow(t as u32)
}

#[test]
fn fair_bit_exact_for_symbolic_bias() {
    let mut mass = [Poly::zero(), Poly::zero()];
    for word in 0..4u32 {
        if let Ok(d) = fair_bit(&mut word_tape(word, 2)) {
            let h = word.count_ones() as usize;
            mass[d.value] = &mass[d.value] + &weight(h, 2 - h);
        }
    }
    assert!(!mass[0].is_zero());
    assert_eq!(mass[0], mass[1]);
    assert_eq!(mass[0], weight(1, 1));
}

#[test]
fn roulette_rotation_example() {
    assert_eq!(rotation_index(&[true, false, true]), Some(2));
    assert_eq!(rotation_index(&[false, true, true]), Some(0));
    assert_eq!(rotation_index(&[true, true, true]), None);
    assert_eq!(fair_roulette(3, &mut tape("HTH")).unwrap(), Draw { value: 2, tosses: 3 });
    assert_eq!(fair_roulette(1, &mut tape("")).unwrap(), Draw { value: 0, tosses: 0 });
    assert_eq!(fair_roulette(0, &mut tape("")), Err(CoinError::NoOutcomes));
    assert_eq!(fair_roulette(3, &mut tape("HHHT")), Err(CoinError::TapeExhausted(4)));
    assert_eq!([1, 2, 3, 4, 5, 6, 8, 11, 12].map(smallest_prime_at_least), [2, 2, 3, 5, 5, 7, 11, 11, 13]);
}

#[test]
fn roulette_exactly_uniform_by_enumeration() {
    for (n, q) in [(3, 3), (5, 5), (7, 7), (4, 5), (6, 7), (2, 2)] {
        assert_eq!(smallest_prime_at_least(n), q);
        // counts[h][k]: words with h heads landing on outcome k.
        let mut counts = vec![vec![0u32; n]; q + 1];
        let mut mass = vec![Poly::zero(); n];
        for word in 0..1u32 << q {
            let h = word.count_ones() as usize;
            if let Ok(d) = fair_roulette(n, &mut word_tape(word, q)) {
                assert_eq!(d.tosses, q as u64);
                counts[h][d.value] += 1;
                mass[d.value] = &mass[d.value] + &weight(h, q - h);
            }
        }
        for (h, row) in counts.iter().enumerate() {
            assert!(row.iter().all(|&c| c == row[0]), "n={n} h={h}: {row:?}");
        }
        assert!(mass.iter().all(|m| *m == mass[0] && !m.is_zero()), "n={n}");
    }
}

#[test]
fn fair_bit_sampling_passes_binomial_test() {
    let mut coin = BiasedCoin::seeded(0.3, 20_240_917).unwrap();
    let trials = 100_000u64;
    let ones: u64 = (0..trials).map(|_| fair_bit(&mut coin).unwrap().value as u64).sum();
    let b = Binomial::new(0.5, trials).unwrap();
    let tail = if ones * 2 >= trials { b.sf(ones - 1) } else { b.cdf(ones) };
    let p_value = (2.0 * tail).min(1.0);
    assert!(p_value > 0.001, "ones={ones} p={p_value}");
}

#[test]
fn roulette_sampling_passes_chi_square() {
    let mut coin = BiasedCoin::seeded(0.3, 7).unwrap();
    let draws = 100_000;
    let mut counts = [0f64; 3];
    for _ in 0..draws {
        counts[fair_roulette(3, &mut coin).unwrap().value] += 1.0;
    }
    let expected = draws as f64 / 3.0;
    let stat: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new(2.0).unwrap().inverse_cdf(0.999);
    assert!(stat < critical, "{counts:?} stat={stat}");
}

#[test]
fn seeded_coin_is_reproducible() {
    let run = || {
        let mut c = BiasedCoin::seeded(0.3, 99).unwrap();
        (0..50).map(|_| fair_roulette(5, &mut c).unwrap().value).collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

// ---- Pythagoras ----

#[test]
fn pythagoras_examples() {
    use Ordering::*;
    let s = |a, b, c| pythagoras_signs(&Triangle::new(a, b, c).unwrap());
    assert_eq!(s(3.0, 4.0, 5.0), (Equal, Equal));
    assert_eq!(s(1.0, 1.0, 1.0), (Greater, Greater));
    assert_eq!(s(2.0, 3.0, 4.0), (Less, Less));
    assert!((angle_excess(&Triangle::new(1.0, 1.0, 1.0).unwrap()) - std::f64::consts::PI / 3.0).abs() < 1e-12);
    assert!(Triangle::new(1.0, 2.0, 3.0).is_err());
    assert!(Triangle::new(0.0, 1.0, 1.0).is_err());
    assert!(Triangle::new(f64::NAN, 1.0, 1.0).is_err());
}

#[test]
fn pythagoras_signs_agree_on_random_triangles() {
    let mut rng = ChaCha8Rng::seed_from_u64(975);
    let mut checked = 0;
    while checked < 10_000 {
        let a: f64 = rng.random_range(0.01..100.0);
        let b: f64 = rng.random_range(0.01..100.0);
        let c: f64 = rng.random_range((a - b).abs()..a + b);
        let Ok(t) = Triangle::new(a, b, c) else { continue };
        let (side, angle) = pythagoras_signs(&t);
        let (alpha, beta, gamma) = t.angles();
        assert!((alpha + beta + gamma - std::f64::consts::PI).abs() < 1e-9);
        if angle == Ordering::Equal {
            // Within the angle tolerance the side expression is tiny too.
            assert!((a * a + b * b - c * c).abs() <= 1e-6 * (a * a + b * b));
        } else {
            assert_eq!(side, angle, "{a} {b} {c}");
        }
        checked += 1;
    }
    for m in 2..40i64 {
        for n in 1..m {
            let (a, b, c) = ((m * m - n * n) as f64, (2 * m * n) as f64, (m * m + n * n) as f64);
            let t = Triangle::new(a, b, c).unwrap();
            assert_eq!(pythagoras_signs(&t), (Ordering::Equal, Ordering::Equal));
        }
    }
}

proptest! {
    #[test]
    fn pythagoras_integer_sides(a in 1u32..500, b in 1u32..500, c in 1u32..999) {
        let (a, b, c) = (a as f64, b as f64, c as f64);
        if let Ok(t) = Triangle::new(a, b, c) {
            let (side, angle) = pythagoras_signs(&t);
            prop_assert_eq!(side, angle);
        }
    }
}

// ---- Sylvester ----

fn pts(v: &[(i64, i64)]) -> Vec<Point> {
    v.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

/// Exact slope from `p` to `r` (`None` when vertical).
fn slope(p: Point, r: Point) -> Option<BigRational> {
    (r.x != p.x).then(|| BigRational::new((r.y - p.y).into(), (r.x - p.x).into()))
}

fn on_line(p: Point, q: Point, r: Point) -> bool {
    r == p || r == q || slope(p, r) == slope(p, q)
}

fn verify(ps: &[Point], verdict: SylvesterLine) -> bool {
    let all_on = |p: Point, q: Point| ps.iter().filter(|&&r| on_line(p, q, r)).count();
    match verdict {
        SylvesterLine::Collinear => all_on(ps[0], ps[1]) == ps.len(),
        SylvesterLine::Ordinary(p, q) => {
            p != q && ps.contains(&p) && ps.contains(&q) && all_on(p, q) == 2 && all_on(ps[0], ps[1]) < ps.len()
        }
    }
}

#[test]
fn sylvester_examples() {
    let line = pts(&[(0, 0), (1, 1), (2, 2)]);
    assert_eq!(sylvester_line(&line).unwrap(), SylvesterLine::Collinear);
    let tri = pts(&[(0, 0), (1, 0), (0, 1)]);
    assert!(matches!(sylvester_line(&tri).unwrap(), SylvesterLine::Ordinary(..)));
    let grid: Vec<Point> = (0..3).flat_map(|x| (0..3).map(move |y| Point::new(x, y))).collect();
    let v = sylvester_line(&grid).unwrap();
    assert!(verify(&grid, v), "{v:?}");
    assert!(verify(&grid, SylvesterLine::Ordinary(Point::new(0, 0), Point::new(1, 2))));
    assert!(sylvester_line(&pts(&[(0, 0)])).is_err());
    assert!(sylvester_line(&pts(&[(0, 0), (0, 0), (1, 1)])).is_err());
    assert_eq!(parse_points("0\t0\n1, 2\n\n# c\n3 4\n").unwrap(), pts(&[(0, 0), (1, 2), (3, 4)]));
    assert!(parse_points("0\n").is_err());
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, k, i + 1, cur, f);
        cur.pop();
    }
}

#[test]
fn sylvester_on_small_grid_sets() {
    let grid: Vec<Point> = (0..5).flat_map(|x| (0..5).map(move |y| Point::new(x, y))).collect();
    let sets = std::cell::Cell::new(0);
    let mut check = |idx: &[usize]| {
        let ps: Vec<Point> = idx.iter().map(|&i| grid[i]).collect();
        let v = sylvester_line(&ps).unwrap();
        assert!(verify(&ps, v), "{ps:?} {v:?}");
        sets.set(sets.get() + 1);
    };
    // Every set of 2 to 5 points, then random 6- and 7-point sets up to 10^5
    // sets in total.
    for k in 2..=5 {
        subsets(25, k, 0, &mut Vec::new(), &mut check);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1016);
    while sets.get() < 100_000 {
        let k = rng.random_range(6..=7);
        let mut idx = rand::seq::index::sample(&mut rng, 25, k).into_vec();
        idx.sort();
        check(&idx);
    }
}

// ---- knight's tour ----

#[test]
fn knight_tours() {
    assert_eq!(knight_tour(1).unwrap(), KnightTour::Tour(vec![(0, 0)]));
    for n in 2..=4 {
        assert_eq!(knight_tour(n).unwrap(), KnightTour::NoTour, "n={n}");
    }
    for n in 5..=8 {
        let KnightTour::Tour(t) = knight_tour(n).unwrap() else { panic!("n={n}") };
        assert!(validate_tour(n, &t), "n={n}");
        assert_eq!(t[0], (0, 0));
    }
    assert!(knight_tour(0).is_err());
    assert!(knight_tour(9).is_err());
}

#[test]
fn tour_validator_rejects_bad_tours() {
    assert!(!validate_tour(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]));
    assert!(!validate_tour(1, &[]));
    assert!(!validate_tour(1, &[(0, 0), (0, 0)]));
    assert!(!validate_tour(1, &[(1, 0)]));
}

// ---- river crossing ----

#[test]
fn river_crossing_plan() {
    let plan = river_crossing();
    assert_eq!(plan.len(), 7);
    assert_eq!(plan[0], Some(Item::Goat));
    assert_eq!(plan[6], Some(Item::Goat));
    let banks = replay(Bank::START, &plan).expect("legal plan");
    assert_eq!(*banks.last().unwrap(), Bank::GOAL);
    assert!(banks.iter().all(|b| b.is_valid()));
    let reversed: Vec<_> = plan.iter().rev().copied().collect();
    assert_eq!(replay(Bank::GOAL, &reversed).unwrap().last(), Some(&Bank::START));
}

#[test]
fn river_crossing_is_minimal() {
    let moves = [None, Some(Item::Wolf), Some(Item::Goat), Some(Item::Cabbage)];
    for len in 0..7u32 {
        for code in 0..4usize.pow(len) {
            let plan: Vec<_> = (0..len).map(|i| moves[code / 4usize.pow(i) % 4]).collect();
            if let Some(b) = replay(Bank::START, &plan) {
                assert_ne!(*b.last().unwrap(), Bank::GOAL);
            }
        }
    }
    // Any first move other than the goat is illegal.
    for m in [None, Some(Item::Wolf), Some(Item::Cabbage)] {
        assert_eq!(Bank::START.cross(m), None);
    }
}
