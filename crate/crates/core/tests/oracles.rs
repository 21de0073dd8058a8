mod common;

use common::{bits, naive_width, naive_z_max};
use czcp::correlation::acc;
use czcp::czcp::construction2_parameters;
use czcp::gbf::DjParams;
use czcp::search::NAIVE_MAX_N;
use czcp::training::{assemble_x, proposed_matrix, seed_psi, verify_optimal};
use czcp::{construction2, czcp_width, search_max_z, QarySequence, SearchTask, SeedVariant, SequencePair};
use num_complex::Complex64;
use std::collections::BTreeSet;
use std::f64::consts::PI;

fn direct_acc(a: &QarySequence, b: &QarySequence, tau: i64) -> Complex64 {
    let root = |q: u32, k: u32| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / q as f64);
    let n = a.len() as i64;
    let mut s = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let m = k + tau;
        if (0..n).contains(&m) {
            s += root(a.q(), a.phases()[k as usize]) * root(b.q(), b.phases()[m as usize]).conj();
        }
    }
    s
}

#[test]
fn correlation_kernel_matches_direct_sum() {
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for q in [2u32, 3, 4, 5, 8] {
        for n in 1..12usize {
            let a = QarySequence::new(q, (0..n).map(|_| (next() % q as u64) as u32).collect()).unwrap();
            let b = QarySequence::new(q, (0..n).map(|_| (next() % q as u64) as u32).collect()).unwrap();
            for tau in -(n as i64)..=(n as i64) {
                let got = acc(&a, &b, tau).unwrap().to_c64();
                assert!((got - direct_acc(&a, &b, tau)).norm() < 1e-9, "q={q} n={n} tau={tau}");
            }
        }
    }
}

#[test]
fn naive_oracle_on_known_pairs() {
    assert_eq!(naive_width(&[1, 1, 1, -1], &[1, 1, -1, 1]), 2);
    assert_eq!(naive_width(&[1, 1], &[1, 1]), 0);
    let p = SequencePair::parse("+++-++-+", "+++---+-").unwrap();
    let a = p.a.signs().unwrap().iter().map(|&v| v as i64).collect::<Vec<_>>();
    let b = p.b.signs().unwrap().iter().map(|&v| v as i64).collect::<Vec<_>>();
    assert_eq!(naive_width(&a, &b), czcp_width(&p).z);
}

#[test]
fn naive_width_agrees_with_library_on_all_length_six_pairs() {
    let n = 6;
    for x in 0..1u64 << n {
        for y in 0..1u64 << n {
            let (a, b) = (bits(x, n), bits(y, n));
            let to = |v: &[i64]| QarySequence::from_signs(&v.iter().map(|&s| s as i32).collect::<Vec<_>>()).unwrap();
            let p = SequencePair::new(to(&a), to(&b)).unwrap();
            assert_eq!(naive_width(&a, &b), czcp_width(&p).z, "{p:?}");
        }
    }
}

#[test]
fn pruned_search_matches_enumeration() {
    for n in (2..=10).step_by(2) {
        let pruned = search_max_z(&SearchTask::new(n)).unwrap();
        assert_eq!(pruned.z_max, naive_z_max(n), "N={n}");
        let mut task = SearchTask::new(n);
        task.symmetry_reduction = false;
        assert_eq!(search_max_z(&task).unwrap().z_max, pruned.z_max, "N={n}");
    }
    let mut task = SearchTask::new(NAIVE_MAX_N + 2);
    task.symmetry_reduction = false;
    assert!(search_max_z(&task).is_err());
}

#[test]
fn construction2_parameter_counts() {
    for (q, mu) in [(2u32, 2usize), (2, 3), (2, 4), (4, 2), (4, 3)] {
        let params = construction2_parameters(q, mu);
        let fact: usize = (1..mu).product();
        let printed = fact * (q as usize).pow(mu as u32 + 1);
        assert_eq!(params.len(), 2 * printed, "q={q} mu={mu}");
        assert_eq!(czcp::czcp::construction2_count(q, mu) as usize, printed);
        let firsts: BTreeSet<Vec<u32>> = params
            .iter()
            .map(|p| construction2(p).unwrap().a.phases().to_vec())
            .collect();
        assert_eq!(firsts.len(), printed, "q={q} mu={mu}");
    }
}

/// `X` built from its definition: row `k` of block `n` column `c` is `x_n[(k - c) mod L]`.
fn dense_x(rows: &[Vec<Complex64>], lambda: usize) -> Vec<Vec<Complex64>> {
    let l = rows[0].len();
    (0..l)
        .map(|k| {
            rows.iter()
                .flat_map(|x| (0..=lambda).map(move |c| x[(k + l - c) % l]))
                .collect()
        })
        .collect()
}

#[test]
fn stacked_matrix_matches_definition() {
    let p = SequencePair::parse("+++-++-++-+++---", "+++-++-+-+---+++").unwrap();
    for variant in [SeedVariant::Psi1, SeedVariant::Psi2] {
        let m = proposed_matrix::<f64>(&p, variant, 4, 2).unwrap();
        let x = assemble_x(&m, 5).unwrap();
        let want = dense_x(m.rows(), 5);
        for (k, row) in want.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                assert_eq!(x.x[(k, c)], *v);
            }
        }
    }
}

#[test]
fn seeded_blocks_follow_psi_definition() {
    let p = SequencePair::parse("+++-++-+", "+++---+-").unwrap();
    let psi1 = seed_psi(&p, SeedVariant::Psi1).unwrap();
    assert_eq!(psi1.blocks()[1], vec![p.a.clone(), p.b.clone()]);
    let psi2 = seed_psi(&p, SeedVariant::Psi2).unwrap();
    let rev_conj_b: Vec<u32> = p.b.phases().iter().rev().map(|&v| (2 - v) % 2).collect();
    let neg_rev_conj_a: Vec<u32> = p.a.phases().iter().rev().map(|&v| (2 - v + 1) % 2).collect();
    assert_eq!(psi2.block(1, 0).phases(), &rev_conj_b[..]);
    assert_eq!(psi2.block(1, 1).phases(), &neg_rev_conj_a[..]);
}

#[test]
fn quaternary_perfect_pairs_seed_optimal_matrices() {
    let params = DjParams {
        q: 4,
        mu: 3,
        pi: vec![3, 1, 2],
        w: vec![1, 0, 3],
        w0: 2,
        w_prime: 2,
    };
    let p = construction2(&params).unwrap();
    assert_eq!(czcp_width(&p).z, 4);
    for variant in [SeedVariant::Psi1, SeedVariant::Psi2] {
        let m = proposed_matrix::<i64>(&p, variant, 4, 2).unwrap();
        assert!(verify_optimal(&m, 4).unwrap().optimal, "{variant:?}");
        assert!(!verify_optimal(&m, 5).unwrap().optimal, "{variant:?}");
    }
}
