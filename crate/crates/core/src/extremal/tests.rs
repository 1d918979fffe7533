use proptest::prelude::*;

use super::*;
use crate::exactla::rank;
use crate::formspace::Policy;

fn rho_oracle(n: u64) -> u64 {
    if n % 16 == 0 {
        return rho_oracle(n / 16) + 8;
    }
    match n.trailing_zeros() {
        0 => 1,
        1 => 2,
        2 => 4,
        _ => 8,
    }
}

#[test]
fn rho_matches_recursive_oracle() {
    for n in 1..=1u64 << 16 {
        let r = rho(n).unwrap();
        assert_eq!(r, rho_oracle(n), "n = {n}");
        assert!(r <= n);
        assert_eq!(r == n, [1, 2, 4, 8].contains(&n), "n = {n}");
    }
    assert_eq!(rho(16).unwrap(), 9);
    assert_eq!(rho(32).unwrap(), 10);
    assert_eq!(rho(64).unwrap(), 12);
    assert_eq!(rho(3 * 256).unwrap(), 17);
    assert!(matches!(rho(0), Err(Error::InvalidDegree(_))));
}

#[test]
fn rho_decomposition_fields() {
    let r = RhoDecomposition::new(3 * 128).unwrap();
    assert_eq!((r.odd_part, r.c, r.d), (3, 3, 1));
    assert_eq!(r.rho(), 16);
}

#[test]
fn real_mu_table() {
    assert_eq!(real_mu_interval(1).unwrap(), Interval(1, 1));
    assert_eq!(real_mu_interval(7).unwrap(), Interval(1, 1));
    assert_eq!(real_mu_interval(2).unwrap(), Interval(1, 2));
    assert_eq!(real_mu_interval(4).unwrap(), Interval(2, 4));
    assert_eq!(real_mu_interval(8).unwrap(), Interval(4, 8));
    assert_eq!(real_mu_interval(16).unwrap(), Interval(8, 8));
    assert_eq!(real_mu_interval(32).unwrap(), Interval(9, 10));
    assert_eq!(real_mu_interval(12).unwrap(), Interval(2, 4));
    for n in 1..=4096u64 {
        let Interval(lo, hi) = real_mu_interval(n).unwrap();
        assert!(lo <= hi && hi <= rho(n).unwrap(), "n = {n}");
    }
    assert_eq!(serde_json::to_string(&Interval(9, 10)).unwrap(), "[9,10]");
}

#[test]
fn gaussian_binomials() {
    assert_eq!(gaussian_binomial(4, 0, 3), 1);
    assert_eq!(gaussian_binomial(4, 1, 3), 40);
    assert_eq!(gaussian_binomial(4, 2, 3), 130);
    assert_eq!(gaussian_binomial(4, 4, 3), 1);
    assert_eq!(gaussian_binomial(3, 5, 3), 0);
    assert_eq!(gaussian_binomial(4, 2, 5), 806);
    assert_eq!(gaussian_binomial(200, 100, 1021), u128::MAX);
}

fn tower(p: u64, s: u32, n: usize) -> FieldTower {
    FieldTower::new(p, s, n).unwrap()
}

#[test]
fn constructions_reach_n() {
    let cfg = EnumConfig::exhaustive();
    for (p, s, n) in [(3, 1, 1), (3, 1, 2), (3, 1, 3), (3, 1, 4), (3, 1, 6), (5, 1, 3), (7, 1, 2), (3, 2, 3)]
    {
        let t = tower(p, s, n);
        let tau = construct_regular_rep_subspace(&t, &cfg).unwrap();
        assert_eq!((tau.best_dim, tau.target), (n, Target::Tau));
        assert!(tau.verified, "tau {p}^{s}, n = {n}");
        let mu = construct_symmetric_witness(&t, &cfg).unwrap();
        assert_eq!((mu.best_dim, mu.target), (n, Target::Mu));
        assert!(mu.verified, "mu {p}^{s}, n = {n}");
        assert!(mu.witness_basis.iter().all(Mat::is_symmetric));
    }
}

#[test]
fn sampled_verification_is_not_a_proof() {
    let t = tower(3, 1, 6);
    let cfg = EnumConfig::sampled(50, 1);
    let r = construct_regular_rep_subspace(&t, &cfg).unwrap();
    assert!(r.all_invertible);
    assert!(!r.verified);
    assert!(!r.verification.is_exhaustive());
}

proptest! {
    #[test]
    fn regular_rep_is_multiplicative(a in proptest::collection::vec(0u32..5, 3),
                                     b in proptest::collection::vec(0u32..5, 3)) {
        let t = tower(5, 1, 3);
        let (a, b) = (t.element(a).unwrap(), t.element(b).unwrap());
        let f = t.base();
        let lhs = t.multiplication_matrix(&a).mul(f, &t.multiplication_matrix(&b));
        prop_assert_eq!(lhs, t.multiplication_matrix(&t.mul(&a, &b)));
    }
}

#[test]
fn block_of_regular_rep() {
    let cfg = EnumConfig::exhaustive();
    let f = BaseField::prime(3).unwrap();
    // span{I} in M(1)
    let one = SearchResult::checked(&f, Target::Tau, 1, &[Mat::identity(1)], SearchMode::Construction, &cfg)
        .unwrap();
    let b = block_construction(&f, &one, &cfg).unwrap();
    assert_eq!(b.witness_basis, vec![Mat::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()]);
    assert!(b.verified);

    let t = tower(3, 1, 2);
    let u = construct_regular_rep_subspace(&t, &cfg).unwrap();
    let b = block_construction(&f, &u, &cfg).unwrap();
    assert_eq!((b.n, b.best_dim, b.target), (4, 2, Target::Mu));
    assert_eq!(b.verification, EnumerationMode::Exhaustive);
    assert!(b.verified && b.witness_basis.iter().all(Mat::is_symmetric));
    let prof = rank_histogram(&f, &b.witness_basis, &cfg).unwrap();
    assert_eq!(prof.histogram.get(&4), Some(&8));
}

#[test]
fn block_rejects_unverified_and_foreign_witnesses() {
    let cfg = EnumConfig::exhaustive();
    let f = BaseField::prime(3).unwrap();
    let sing = Mat::from_rows(&[vec![1, 0], vec![0, 0]]).unwrap();
    let bad = SearchResult::checked(&f, Target::Tau, 2, &[sing], SearchMode::Construction, &cfg).unwrap();
    assert!(!bad.all_invertible);
    assert!(matches!(block_construction(&f, &bad, &cfg), Err(Error::Unverified)));

    let u = construct_regular_rep_subspace(&tower(5, 1, 2), &cfg).unwrap();
    assert!(matches!(block_construction(&f, &u, &cfg), Err(Error::Shape(_))));
}

/// All members of the span of `gens` (coordinate vectors over GF(p)).
fn span_members(p: u32, gens: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let len = gens[0].len();
    let mut out = vec![vec![0; len]];
    for g in gens {
        let prev = out.clone();
        for lam in 1..p {
            out.extend(prev.iter().map(|w| (0..len).map(|c| (w[c] + lam * g[c]) % p).collect::<Vec<_>>()));
        }
    }
    out
}

fn det2(p: u32, m: &[u32]) -> u32 {
    (m[0] * m[3] + (p - 1) * m[1] % p * m[2]) % p
}

/// Brute force over GF(3): is there an invertible-closed subspace of `M(2)`
/// of dimension `k` (all subspaces as spans of k-tuples, or kernels of
/// functionals for k = 3)?
fn brute_m2(k: usize, sym: bool) -> bool {
    let p = 3u32;
    let all: Vec<Vec<u32>> = (1..81u32)
        .map(|c| (0..4).map(|j| c / p.pow(j) % p).collect())
        .filter(|m: &Vec<u32>| !sym || m[1] == m[2])
        .collect();
    let closed = |gens: &[Vec<u32>]| {
        let mem = span_members(p, gens);
        mem.len() == p.pow(gens.len() as u32) as usize
            && mem.iter().filter(|m| m.iter().any(|&x| x != 0)).all(|m| det2(p, m) != 0)
    };
    match k {
        1 => all.iter().any(|a| closed(std::slice::from_ref(a))),
        2 => all.iter().any(|a| all.iter().any(|b| closed(&[a.clone(), b.clone()]))),
        3 => {
            // every 3-dim subspace of M(2) is the kernel of a nonzero functional
            all.iter().any(|f| {
                let ker: Vec<&Vec<u32>> =
                    all.iter().filter(|m| (0..4).map(|j| f[j] * m[j]).sum::<u32>() % p == 0).collect();
                ker.len() == 26 && ker.iter().all(|m| det2(p, m) != 0)
            }) || (sym && all.iter().all(|m| det2(p, m) != 0))
        }
        _ => unreachable!(),
    }
}

#[test]
fn exhaustive_small_cases_agree_with_brute_force() {
    let cfg = EnumConfig::exhaustive();
    for target in [Target::Tau, Target::Mu] {
        let r = exhaustive_search(target, 2, 3, &cfg).unwrap();
        assert_eq!(r.best_dim, 2, "{target:?}");
        assert!(r.verified);
        assert!(matches!(r.mode, SearchMode::Exhaustive { nodes } if nodes > 1));
        let sym = target == Target::Mu;
        assert!(brute_m2(2, sym));
        assert!(!brute_m2(3, sym));
    }
}

#[test]
fn exhaustive_is_deterministic_and_matches_constructions() {
    let cfg = EnumConfig::exhaustive();
    let a = exhaustive_search(Target::Mu, 3, 3, &cfg).unwrap();
    let b = exhaustive_search(Target::Mu, 3, 3, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.best_dim, 3);
    assert!(a.verified);
    let r = exhaustive_search(Target::Tau, 2, 5, &cfg).unwrap();
    assert_eq!(r.best_dim, 2);
    for m in &r.witness_basis {
        assert_eq!(rank(&BaseField::prime(5).unwrap(), m), 2);
    }
}

#[test]
fn exhaustive_respects_budget() {
    let cfg = EnumConfig::exhaustive();
    match exhaustive_search(Target::Tau, 3, 3, &cfg) {
        Err(Error::BudgetExceeded { needed, budget }) => {
            assert_eq!(budget, cfg.budget);
            assert!(needed > budget as u128);
        }
        other => panic!("expected a budget error, got {other:?}"),
    }
    let tight = EnumConfig { budget: 10, ..EnumConfig::exhaustive() };
    assert!(matches!(exhaustive_search(Target::Tau, 2, 3, &tight), Err(Error::BudgetExceeded { .. })));
    assert!(matches!(exhaustive_search(Target::Tau, 2, 4, &cfg), Err(Error::EvenCharacteristic(_))));
    assert!(matches!(exhaustive_search(Target::Tau, 0, 3, &cfg), Err(Error::InvalidDegree(_))));
}

#[test]
fn greedy_finds_full_dimension() {
    let cfg = EnumConfig::exhaustive();
    let r = greedy_search(Target::Mu, 4, 3, 11, 8, &cfg).unwrap();
    assert_eq!(r.best_dim, 4);
    assert!(r.verified);
    assert_eq!(r.mode, SearchMode::Greedy { seed: 11, restarts: 8 });
    let r = greedy_search(Target::Tau, 2, 3, 5, 4, &cfg).unwrap();
    assert_eq!(r.best_dim, 2);
}

#[test]
fn greedy_first_pass_is_deterministic() {
    let cfg = EnumConfig::exhaustive();
    let a = greedy_search(Target::Mu, 3, 5, 42, 0, &cfg).unwrap();
    let b = greedy_search(Target::Mu, 3, 5, 42, 0, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.best_dim >= 1 && a.best_dim <= 3);
    assert!(a.verified);
}

#[test]
fn greedy_restarts_never_hurt() {
    let cfg = EnumConfig { policy: Policy::Exhaustive, ..EnumConfig::exhaustive() };
    for seed in 0..4 {
        let one = greedy_search(Target::Mu, 4, 3, seed, 0, &cfg).unwrap();
        let many = greedy_search(Target::Mu, 4, 3, seed, 3, &cfg).unwrap();
        assert!(many.best_dim >= one.best_dim);
    }
}

#[test]
fn search_result_json() {
    let cfg = EnumConfig::exhaustive();
    let r = exhaustive_search(Target::Tau, 1, 3, &cfg).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["target"], "tau");
    assert_eq!(v["best_dim"], 1);
    assert_eq!(v["mode"]["kind"], "exhaustive");
    assert_eq!(v["verified"], true);
}
