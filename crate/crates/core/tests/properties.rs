use proptest::prelude::*;

use fairmsr::assign::flow::FlowNetwork;
use fairmsr::constraints::{cluster_feasible, ColorHistogram};
use fairmsr::kcenter::{fft_completion, CompletionInput};
use fairmsr::oracle::{exact_completion, exact_matching, exact_msr};
use fairmsr::search::{centers_and_radii, solve, GuessTuple, SolveOptions};
use fairmsr::{clustering_feasible, enumerate_profiles, ConstraintSpec, Instance, Rational, SolutionFile, SolutionMeta};

fn points(max_n: usize) -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((0u8..60, 0u8..60), 2..=max_n)
}

fn planar(pts: &[(u8, u8)], colors: Vec<usize>, k: usize, spec: ConstraintSpec, scale: f64) -> Instance {
    let coords = pts.iter().map(|&(x, y)| vec![x as f64 * scale, y as f64 * scale]).collect();
    Instance::from_points(coords, colors, k, 0.5, spec).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn completion_within_twice_optimum(
        pts in points(8),
        k in 1usize..=3,
        fixed in prop::collection::vec((0usize..8, 0.0f64..1.0), 0..=2),
    ) {
        let n = pts.len();
        let k = k.min(n);
        let inst = planar(&pts, vec![0; n], k, ConstraintSpec::None, 1.0);
        let fixed: Vec<_> = fixed.into_iter().take(k).collect();
        let centers = fixed.iter().map(|f| f.0 % n).collect();
        let radii = fixed.iter().map(|f| f.1 * inst.max_distance()).collect();
        let input = CompletionInput::new(&inst, centers, radii, k);
        let greedy = fft_completion(&input).value;
        let best = exact_completion(&input).unwrap();
        prop_assert!(greedy <= 2.0 * best + 1e-9, "greedy {} optimum {}", greedy, best);
    }

    #[test]
    fn max_flow_equals_max_matching(edges in prop::collection::vec(prop::collection::vec(any::<bool>(), 1..=6), 1..=6)) {
        let right = edges[0].len();
        let edges: Vec<Vec<bool>> = edges.into_iter().map(|mut row| { row.resize(right, false); row }).collect();
        let left = edges.len();
        let (s, t) = (left + right, left + right + 1);
        let mut net = FlowNetwork::new(left + right + 2);
        for (l, row) in edges.iter().enumerate() {
            net.add_edge(s, l, 1);
            for (r, &e) in row.iter().enumerate() {
                if e {
                    net.add_edge(l, left + r, 1);
                }
            }
        }
        for r in 0..right {
            net.add_edge(left + r, t, 1);
        }
        prop_assert_eq!(net.max_flow(s, t) as usize, exact_matching(&edges).unwrap());
    }

    #[test]
    fn merged_lu_clusters_stay_feasible(
        a in prop::collection::vec(0u64..5, 3),
        b in prop::collection::vec(0u64..5, 3),
        l in prop::collection::vec(0i64..=3, 3),
        u in prop::collection::vec(4i64..=10, 3),
    ) {
        let spec = ConstraintSpec::LuFairness {
            l: l.iter().map(|&x| Rational::new(x, 10).unwrap()).collect(),
            u: u.iter().map(|&x| Rational::new(x, 10).unwrap()).collect(),
        };
        let (ha, hb) = (ColorHistogram::from_counts(a), ColorHistogram::from_counts(b));
        let global = ha.merged(&hb);
        if cluster_feasible(&spec, &ha, &global) && cluster_feasible(&spec, &hb, &global) {
            prop_assert!(cluster_feasible(&spec, &ha.merged(&hb), &global));
        }
    }

    #[test]
    fn merged_ratio_balanced_clusters_stay_feasible(
        a in prop::collection::vec(0u64..6, 2),
        b in prop::collection::vec(0u64..6, 2),
        num in 0i64..=5,
    ) {
        let spec = ConstraintSpec::RatioBalance { b: Rational::new(num, 5).unwrap() };
        let (ha, hb) = (ColorHistogram::from_counts(a), ColorHistogram::from_counts(b));
        let global = ha.merged(&hb);
        if cluster_feasible(&spec, &ha, &global) && cluster_feasible(&spec, &hb, &global) {
            prop_assert!(cluster_feasible(&spec, &ha.merged(&hb), &global));
        }
    }

    #[test]
    fn every_cover_spends_three_times_the_profile(pts in points(6), a in prop::collection::vec(1usize..=3, 3)) {
        let n = pts.len().max(3);
        let mut pts = pts;
        pts.resize(n, (0, 0));
        let inst = planar(&pts, vec![0; n], 3, ConstraintSpec::None, 1.0);
        let a = GuessTuple::new(a).unwrap();
        for profile in enumerate_profiles(&inst, 0.5).unwrap().step_by(7) {
            let cover = centers_and_radii(&inst, &profile, &a);
            prop_assert!((cover.radius_sum() - 3.0 * profile.sum()).abs() <= 1e-9 * profile.sum().max(1.0));
        }
    }

    #[test]
    fn instance_and_solution_json_round_trip(pts in points(8), k in 1usize..=3) {
        let n = pts.len();
        let colors = (0..n).map(|i| i % 2).collect();
        let inst = planar(&pts, colors, k.min(n), ConstraintSpec::None, 0.37);
        let back = Instance::from_json(&inst.to_json()).unwrap();
        prop_assert_eq!(&back, &inst);

        let rep = solve(&inst, &SolveOptions::default()).unwrap();
        let file = SolutionFile::new(&rep.clustering, true, SolutionMeta::default());
        let parsed: SolutionFile = serde_json::from_str(&file.to_json()).unwrap();
        prop_assert_eq!(parsed.to_clustering(&inst).unwrap(), rep.clustering);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn doubling_distances_doubles_the_solution(pts in points(6), k in 1usize..=2) {
        let n = pts.len();
        let colors: Vec<usize> = (0..n).map(|i| i % 2).collect();
        let spec = if n % 2 == 0 { ConstraintSpec::ExactFairness } else { ConstraintSpec::None };
        let one = planar(&pts, colors.clone(), k, spec.clone(), 1.0);
        let two = planar(&pts, colors, k, spec, 2.0);
        let (s1, s2) = (solve(&one, &SolveOptions::default()).unwrap(), solve(&two, &SolveOptions::default()).unwrap());
        prop_assert_eq!(s1.clustering.assignment(), s2.clustering.assignment());
        prop_assert_eq!(2.0 * s1.clustering.cost(), s2.clustering.cost());
        prop_assert_eq!(2.0 * exact_msr(&one).unwrap().opt_cost, exact_msr(&two).unwrap().opt_cost);
    }

    #[test]
    fn solver_never_beats_the_optimum(pts in points(7), k in 1usize..=3, ell in 1usize..=3) {
        let n = pts.len();
        let inst = planar(&pts, vec![0; n], k.min(n), ConstraintSpec::LowerBound { ell: ell.min(n) }, 1.0);
        let exact = exact_msr(&inst).unwrap();
        let rep = solve(&inst, &SolveOptions::default()).unwrap();
        prop_assert!(clustering_feasible(inst.constraint(), &inst, &rep.clustering));
        prop_assert!(rep.clustering.cost() >= exact.opt_cost - 1e-9);
        prop_assert!(rep.clustering.cost() <= 4.5 * exact.opt_cost + 1e-9);
    }
}
