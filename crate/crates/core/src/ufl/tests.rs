use super::*;
use crate::instance::generate::{generate_random_ufl, generate_ring_ufl, UflParams};
use crate::instance::{Facility, UflInstance};
use crate::oracles::ufl::{lmp_certificate, solve_flp};
use crate::par::Exec;
use crate::Error;
use proptest::prelude::*;

fn inst(open: &[(usize, f64)], assign: Vec<Vec<f64>>) -> UflInstance {
    let facilities = open
        .iter()
        .map(|&(agent, open_cost)| Facility { agent, open_cost })
        .collect();
    let clients = assign[0].len();
    UflInstance::new(facilities, clients, assign).unwrap()
}

fn random(seed: u64, facilities: usize, clients: usize, agents: usize) -> UflInstance {
    generate_random_ufl(UflParams {
        facilities,
        clients,
        agents,
        dims: 2,
        seed,
    })
    .unwrap()
}

#[test]
fn vcg_examples() {
    let i = inst(&[(0, 1.0), (1, 2.0)], vec![vec![0.0], vec![0.0]]);
    let frac = solve_flp(&i).unwrap();
    assert_eq!(
        fractional_vcg_payments(&i, &frac, Exec::Sequential).unwrap(),
        vec![2.0, 0.0]
    );

    let sym = inst(&[(0, 1.0), (1, 1.0)], vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
    let frac = solve_flp(&sym).unwrap();
    let p = fractional_vcg_payments(&sym, &frac, Exec::Sequential).unwrap();
    assert!((p[0] - p[1]).abs() < 1e-12);

    let mono = inst(&[(0, 1.0), (0, 1.0)], vec![vec![0.0], vec![1.0]]);
    let frac = solve_flp(&mono).unwrap();
    assert_eq!(
        fractional_vcg_payments(&mono, &frac, Exec::Sequential).unwrap_err(),
        Error::Monopoly(0)
    );
}

#[test]
fn jms_examples() {
    let one = inst(&[(0, 3.0)], vec![vec![1.0, 1.0]]);
    let s = jms_lmp(&one);
    assert_eq!(s.open, vec![true]);
    assert_eq!(s.cost(&one), 5.0);
    assert!(lmp_certificate(&one, &s, 2.0).unwrap());
    let trace = jms_lmp_traced(&one.open_costs(), one.assign_costs());
    assert_eq!(trace.opened_at, vec![Some(2.5)]);
    assert_eq!(trace.budgets, vec![2.5, 2.5]);

    let free = inst(
        &[(0, 0.0), (1, 0.0), (2, 0.0)],
        vec![vec![1.0, 4.0], vec![3.0, 2.0], vec![5.0, 5.0]],
    );
    let s = jms_lmp(&free);
    assert_eq!(s.connection_cost(free.assign_costs()), 3.0);
    assert_eq!(s.open, vec![true, true, false]);

    let apart = inst(
        &[(0, 5.0), (1, 5.0)],
        vec![vec![0.0, 10.0], vec![10.0, 0.0]],
    );
    let s = jms_lmp(&apart);
    assert_eq!(s.open, vec![true, true]);
    assert_eq!(s.cost(&apart), 10.0);
    assert!(lmp_certificate(&apart, &s, 2.0).unwrap());
}

#[test]
fn integral_optimum_decomposes_into_itself() {
    let i = inst(&[(0, 3.0)], vec![vec![1.0, 1.0]]);
    let frac = solve_flp(&i).unwrap();
    let d = convex_decompose(&i, &frac, &Jms).unwrap();
    assert_eq!(d.rounds, 0);
    assert_eq!(d.columns.len(), 1);
    assert_eq!(d.columns[0].weight, 1.0);
    assert_eq!(d.columns[0].solution.open, vec![true]);
}

#[test]
fn half_open_facilities_split_evenly() {
    let i = inst(&[(0, 1.0), (1, 1.0)], vec![vec![0.0], vec![0.0]]);
    let mut frac = solve_flp(&i).unwrap();
    // The simplex returns a vertex; force the symmetric optimum.
    frac.y = vec![0.5, 0.5];
    frac.x = vec![vec![0.5], vec![0.5]];
    for d in [
        convex_decompose(&i, &frac, &Jms).unwrap(),
        convex_decompose_enumerated(&i, &frac, 2.0).unwrap(),
    ] {
        let mut cols: Vec<(Vec<bool>, f64)> = d
            .columns
            .iter()
            .map(|c| (c.solution.open.clone(), c.weight))
            .collect();
        cols.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(cols.len(), 2);
        assert_eq!(cols[0].0, vec![false, true]);
        assert_eq!(cols[1].0, vec![true, false]);
        assert!((cols[0].1 - 0.5).abs() < 1e-9 && (cols[1].1 - 0.5).abs() < 1e-9);
    }
}

#[test]
fn integral_optimum_gives_a_deterministic_mechanism() {
    let i = inst(&[(0, 1.0), (1, 2.0)], vec![vec![0.0], vec![0.0]]);
    let r = run_ufl_mechanism(&i, 7, UflOptions::default()).unwrap();
    assert_eq!(r.outcomes.len(), 1);
    assert_eq!(r.outcomes[0].payments, r.vcg_payments);
    assert_eq!(r.sampled, 0);
}

#[test]
fn jms_is_lmp_on_random_instances() {
    for seed in 0..500 {
        let nf = 2 + (seed % 11) as usize;
        let i = random(seed, nf, 1 + (seed % 7) as usize, 2);
        let s = jms_lmp(&i);
        assert!(s.is_feasible(&i));
        assert!(lmp_certificate(&i, &s, 2.0).unwrap(), "seed {seed}");
    }
}

#[test]
fn ring_instances_have_fractional_optima() {
    let mut fractional = 0;
    for seed in 0..40 {
        let i = generate_ring_ufl(3 + (seed % 4) as usize, 2, seed).unwrap();
        let frac = solve_flp(&i).unwrap();
        let d = convex_decompose(&i, &frac, &Jms).unwrap();
        check_decomposition(&i, &d, 2.0);
        if d.columns.len() > 1 {
            fractional += 1;
        }
    }
    assert!(fractional >= 10, "only {fractional} fractional rings");
}

/// Misreports each owned facility's cost by a set of factors and checks that
/// no misreport raises the exact expected utility.
fn assert_truthful_in_expectation(truth: &UflInstance) {
    const FACTORS: [f64; 7] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0];
    for a in 0..truth.agent_count() {
        let honest = run_ufl_mechanism(truth, 0, UflOptions::default())
            .unwrap()
            .expected_utility(a, truth);
        for l in truth.agent_facilities(a) {
            for factor in FACTORS {
                let mut open = truth.open_costs();
                open[l] *= factor;
                let lie = truth.with_open_costs(&open).unwrap();
                let u = run_ufl_mechanism(&lie, 0, UflOptions::default())
                    .unwrap()
                    .expected_utility(a, truth);
                assert!(
                    u <= honest + 1e-7,
                    "agent {a} gains {} by scaling facility {l} by {factor}",
                    u - honest
                );
            }
        }
    }
}

#[test]
fn truthful_in_expectation_on_small_instances() {
    for seed in 0..50u64 {
        let truth = if seed % 2 == 0 {
            generate_ring_ufl(3 + (seed % 3) as usize, 2 + (seed % 2) as usize, seed).unwrap()
        } else {
            random(
                seed,
                3 + (seed % 3) as usize,
                2 + (seed % 4) as usize,
                2 + (seed % 2) as usize,
            )
        };
        assert_truthful_in_expectation(&truth);
    }
}

fn check_decomposition(i: &UflInstance, d: &ConvexDecomposition, rho: f64) {
    let frac = solve_flp(i).unwrap();
    assert!((d.weight_sum() - 1.0).abs() <= 1e-8);
    for (m, y) in d.marginals(i.facility_count()).iter().zip(&frac.y) {
        assert!((m - y).abs() <= 1e-6, "marginal {m} vs {y}");
    }
    assert!(d.expected_connection_cost() <= rho * frac.connection_cost(i.assign_costs()) + 1e-6);
    for c in &d.columns {
        assert!(c.weight >= 0.0 && c.solution.is_feasible(i));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn decompositions_satisfy_their_identities(seed in any::<u64>(), nf in 2usize..=8, nd in 1usize..=6, agents in 2usize..=4, ring in any::<bool>()) {
        let i = if ring { generate_ring_ufl(nf.max(3), agents.min(nf.max(3)), seed).unwrap() } else { random(seed, nf, nd, agents.min(nf)) };
        let frac = solve_flp(&i).unwrap();
        let generated = convex_decompose(&i, &frac, &Jms).unwrap();
        check_decomposition(&i, &generated, 2.0);
        let enumerated = convex_decompose_enumerated(&i, &frac, 2.0).unwrap();
        check_decomposition(&i, &enumerated, 2.0);
        prop_assert!((generated.master_value - 1.0).abs() <= 1e-6);
        prop_assert!((enumerated.master_value - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn payments_match_vcg_in_expectation(seed in any::<u64>(), nf in 2usize..=6, nd in 1usize..=5, agents in 2usize..=3, ring in any::<bool>()) {
        let i = if ring { generate_ring_ufl(nf.max(3), agents, seed).unwrap() } else { random(seed, nf, nd, agents.min(nf)) };
        let r = run_ufl_mechanism(&i, seed, UflOptions::default()).unwrap();
        let f = i.open_costs();
        for a in 0..i.agent_count() {
            prop_assert!((r.expected_payment(a) - r.vcg_payments[a]).abs() <= 1e-7);
            let own = i.agent_facilities(a);
            for o in &r.outcomes {
                let spent: f64 = own.iter().filter(|&&l| o.solution.open[l]).map(|&l| f[l]).sum();
                prop_assert!(o.payments[a] >= spent - 1e-9);
            }
        }
        prop_assert!(r.expected_cost() <= 2.0 * r.lp_value + 1e-6);
    }
}
