//! End-to-end acceptance criteria. Runs without the test harness so that
//! every criterion prints exactly one PASS/FAIL line.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{brute_force_assignment, cost_rows, hungarian, random_assignment_problem, random_problem, sort_oracle_1d};
use mirrorpair::ot::{functional_f, Method, PivotRule};
use mirrorpair::reflector::{apply_scaling_symmetry, eval_first, target_index};
use mirrorpair::verify::{
    check_monge_ampere, check_opl, check_pushforward, check_reflection_law, energy_balance_rel_error,
    monge_ampere_levels, node_residuals, random_admissible_pair, random_feasible_plan, Bins,
};
use mirrorpair::{design, design_both, Demo, Design, DesignSettings, Kind, ProblemSpec, ReflectorPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

struct Instance {
    label: String,
    spec: ProblemSpec,
    a: Design,
    b: Design,
    time_a: Duration,
    time_b: Duration,
}

fn solve_instance(demo: Demo, cells: usize) -> Instance {
    let (spec, _) = demo.problem_with_cells(cells).to_spec().unwrap();
    let settings = DesignSettings::default();
    let t = Instant::now();
    let a = design(&spec, Kind::TypeA, &settings).unwrap();
    let time_a = t.elapsed();
    let t = Instant::now();
    let b = design(&spec, Kind::TypeB, &settings).unwrap();
    let time_b = t.elapsed();
    Instance {
        label: format!("{demo}/{}pts", spec.source.len()),
        spec,
        a,
        b,
        time_a,
        time_b,
    }
}

/// The demo suite at 16 and 1024 support points (and 256 in between).
fn suite() -> Vec<Instance> {
    let mut out = Vec::new();
    for demo in Demo::ALL {
        let sizes: &[usize] = if demo == Demo::Stretch1d { &[16, 256, 1024] } else { &[4, 16, 32] };
        for &cells in sizes {
            out.push(solve_instance(demo, cells));
        }
    }
    out
}

fn opl_constancy(suite: &[Instance]) -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut where_ = String::new();
    for inst in suite {
        for (d, t) in [(&inst.a, inst.time_a), (&inst.b, inst.time_b)] {
            let r = check_opl(&d.pair);
            if r >= worst {
                worst = r;
                where_ = format!("{} {}", inst.label, d.kind.label());
            }
            slowest = slowest.max(t);
        }
    }
    outcome(
        worst <= 1e-9 && slowest < Duration::from_secs(10),
        format!("max OPL deviation {worst:.3e} ({where_}), slowest solve {:.2}s", slowest.as_secs_f64()),
    )
}

fn duality_identity(suite: &[Instance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_f = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let check_f = |spec: &ProblemSpec, pair: &ReflectorPair, cost: f64| {
        let f = functional_f(pair, spec);
        let expected = spec.beta / 2.0 * spec.mass() - cost / spec.beta;
        (f - expected).abs() / expected.abs().max(spec.beta / 2.0 * spec.mass())
    };
    for n in 1..=10 {
        for _ in 0..6 {
            let beta = rng.gen_range(0.5..2.0);
            let spec = random_assignment_problem(&mut rng, n, beta);
            let d = design(&spec, Kind::TypeA, &DesignSettings::default()).unwrap();
            let c = cost_rows(&spec);
            let assign = hungarian(&c);
            let mut oracle: f64 = assign.iter().enumerate().map(|(i, &j)| c[i][j]).sum::<f64>() / n as f64;
            if n <= 8 {
                let (bf, _) = brute_force_assignment(&c);
                assert!((bf / n as f64 - oracle).abs() <= 1e-12, "hungarian disagrees with brute force");
                oracle = bf / n as f64;
            }
            worst_oracle = worst_oracle.max((d.solve.plan.cost - oracle).abs() / oracle.max(1e-300));
            worst_f = worst_f.max(check_f(&spec, &d.pair, d.solve.plan.cost));
        }
    }
    for inst in suite {
        worst_f = worst_f.max(check_f(&inst.spec, &inst.a.pair, inst.a.solve.plan.cost));
    }
    outcome(
        worst_f <= 1e-9 && worst_oracle <= 1e-9,
        format!("max F identity rel error {worst_f:.3e}, max C_min vs assignment oracle rel error {worst_oracle:.3e}"),
    )
}

fn monotone_recovery() -> Outcome {
    let inst = solve_instance(Demo::Stretch1d, 256);
    let spec = &inst.spec;
    let mut mismatches = [0usize; 2];
    for (slot, (d, reverse)) in [(&inst.a, false), (&inst.b, true)].into_iter().enumerate() {
        let oracle = sort_oracle_1d(&spec.source, &spec.target, reverse);
        let mut expected = vec![usize::MAX; spec.source.len()];
        for &(i, j, _) in &oracle {
            expected[i] = if expected[i] == usize::MAX { j } else { usize::MAX - 1 };
        }
        for i in 0..spec.source.len() {
            if target_index(spec.source.point(i), &d.pair) != expected[i] {
                mismatches[slot] += 1;
            }
        }
    }
    outcome(
        spec.source.len() == 256 && mismatches == [0, 0],
        format!(
            "{} points: type A mismatches vs monotone oracle {}, type B mismatches vs anti-monotone oracle {}",
            spec.source.len(),
            mismatches[0],
            mismatches[1]
        ),
    )
}

fn sandwich(suite: &[Instance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut extra = Vec::new();
    for k in 0..3 {
        let spec = random_problem(&mut rng, 12 + k, 15 - k, 2, 1.0);
        let (a, b) = design_both(&spec, &DesignSettings::default()).unwrap();
        extra.push((spec, a, b));
    }
    let instances = suite
        .iter()
        .filter(|i| i.spec.source.len() <= 256)
        .map(|i| (&i.spec, &i.a, &i.b))
        .chain(extra.iter().map(|(s, a, b)| (s, a, b)));
    let (mut slack_f, mut slack_c) = (f64::INFINITY, f64::INFINITY);
    let (mut pairs, mut plans, mut count) = (0, 0, 0);
    let mut inadmissible = 0;
    let mut near_min = f64::INFINITY;
    for (spec, a, b) in instances {
        count += 1;
        let scale = spec.beta * spec.mass() + 1.0;
        let fa = functional_f(&a.pair, spec);
        let fb = functional_f(&b.pair, spec);
        for _ in 0..100 {
            let ra = random_admissible_pair(spec, Kind::TypeA, &mut rng).unwrap();
            let rb = random_admissible_pair(spec, Kind::TypeB, &mut rng).unwrap();
            inadmissible += usize::from(!ra.is_admissible()) + usize::from(!rb.is_admissible());
            slack_f = slack_f.min((functional_f(&ra, spec) - fa) / scale);
            slack_f = slack_f.min((fb - functional_f(&rb, spec)) / scale);
            pairs += 2;
            // near-optimal comparators: perturbed optimal omega, envelope zeta
            for d in [a, b] {
                let near = perturbed(&d.pair, &mut rng, 1e-3);
                inadmissible += usize::from(!near.is_admissible());
                let f = functional_f(&near, spec);
                let gap = match d.kind {
                    Kind::TypeA => f - fa,
                    Kind::TypeB => fb - f,
                };
                slack_f = slack_f.min(gap / scale);
                near_min = near_min.min(gap / scale);
                pairs += 1;
            }
            let plan = random_feasible_plan(spec, &mut rng).unwrap();
            let cscale = b.solve.plan.cost.abs().max(1e-300);
            slack_c = slack_c.min((plan.cost - a.solve.plan.cost) / cscale);
            slack_c = slack_c.min((b.solve.plan.cost - plan.cost) / cscale);
            plans += 1;
        }
    }
    outcome(
        slack_f >= -1e-9 && slack_c >= -1e-9 && inadmissible == 0,
        format!(
            "{count} instances, {pairs} random pairs (min F slack {slack_f:.3e}, near-optimal {near_min:.3e}), \
             {plans} random plans (min cost slack {slack_c:.3e})"
        ),
    )
}

/// `pair` with every omega moved by up to `size * beta`, and zeta replaced
/// by the induced first-reflector envelope.
fn perturbed(pair: &ReflectorPair, rng: &mut ChaCha8Rng, size: f64) -> ReflectorPair {
    let omega = pair.omega.iter().map(|w| w + size * pair.beta * rng.gen_range(-1.0..1.0)).collect();
    let moved = ReflectorPair { omega, ..pair.clone() };
    let zeta = (0..moved.n_source()).map(|i| eval_first(moved.source_point(i), &moved)).collect();
    ReflectorPair { zeta, ..moved }
}

fn pushforward(suite: &[Instance]) -> Outcome {
    let mut worst = 0.0f64;
    let mut energy = 0.0f64;
    for inst in suite {
        energy = energy.max(energy_balance_rel_error(&inst.spec));
        for bins in [Bins::singletons(inst.spec.target.len()), Bins::grid(&inst.spec.target, 4)] {
            for d in [&inst.a, &inst.b] {
                let r = check_pushforward(&d.pair, &inst.spec, &bins, Some(&d.solve.plan)).unwrap();
                worst = worst.max(r.plan_based.unwrap());
            }
        }
    }
    outcome(
        worst <= 1e-10 && energy <= 1e-12,
        format!("max plan-based L1 error {worst:.3e}, max energy balance error {energy:.3e}"),
    )
}

fn reflection_law(suite: &[Instance]) -> Outcome {
    let mut identity = 0.0f64;
    for inst in suite.iter().filter(|i| i.label.starts_with("identity")) {
        let r = check_reflection_law(&inst.a.pair, &inst.spec, inst.spec.beta).unwrap();
        identity = identity.max(r.max);
    }
    let levels: Vec<f64> = [4, 8, 16]
        .into_iter()
        .map(|cells| {
            let inst = solve_instance(Demo::Gaussian2d, cells);
            check_reflection_law(&inst.a.pair, &inst.spec, inst.spec.beta).unwrap().max
        })
        .collect();
    let decreasing = levels.windows(2).all(|w| w[1] < w[0]);
    outcome(
        identity <= 1e-12 && decreasing,
        format!("identity residual {identity:.3e}; gaussian2d max angle residual at h, h/2, h/4: {}", sci(&levels)),
    )
}

fn monge_ampere() -> Outcome {
    let settings = DesignSettings::default();
    let problem = Demo::Stretch1d.problem_with_cells(32);
    let levels = monge_ampere_levels(&problem, 3, &settings).unwrap();
    let mut worst = 0.0f64;
    let mut nodes = 0;
    for level in &levels {
        let r = node_residuals(level, &problem.source.density, &problem.target.density).unwrap();
        nodes += r.len();
        worst = r.into_iter().fold(worst, f64::max);
    }
    let gp = Demo::Gaussian2d.problem_with_cells(8);
    let glevels = monge_ampere_levels(&gp, 3, &settings).unwrap();
    let medians = check_monge_ampere(&glevels, &gp.source.density, &gp.target.density).unwrap();
    let non_increasing = medians.windows(2).all(|w| w[1] <= w[0]);
    outcome(
        worst <= 1e-6 && nodes > 0 && non_increasing,
        format!("stretch1d max residual {worst:.3e} over {nodes} interior nodes; gaussian2d medians {}", sci(&medians)),
    )
}

fn assignments(spec: &ProblemSpec, pair: &ReflectorPair) -> Vec<usize> {
    (0..spec.source.len()).map(|i| target_index(spec.source.point(i), pair)).collect()
}

fn symmetries(suite: &[Instance]) -> Outcome {
    let mut scaling_changes = 0;
    let mut gauge_changes = 0;
    let mut residual_shift = 0.0f64;
    let bins_of = |s: &ProblemSpec| Bins::grid(&s.target, 4);
    for inst in suite.iter().filter(|i| i.spec.source.len() <= 256) {
        for d in [&inst.a, &inst.b] {
            let base = assignments(&inst.spec, &d.pair);
            for lambda in [0.5, 2.0] {
                let scaled = apply_scaling_symmetry(&d.pair, lambda).unwrap();
                scaling_changes += usize::from(assignments(&inst.spec, &scaled) != base);
            }
            let bins = bins_of(&inst.spec);
            let residuals = |p: &ReflectorPair| {
                [
                    check_opl(p),
                    check_reflection_law(p, &inst.spec, inst.spec.beta).unwrap().max,
                    check_pushforward(p, &inst.spec, &bins, Some(&d.solve.plan)).unwrap().plan_based.unwrap(),
                    check_pushforward(p, &inst.spec, &bins, None).unwrap().map_based,
                ]
            };
            let r0 = residuals(&d.pair);
            for c in [-0.75, 3.25] {
                let moved = d.pair.translated(c);
                gauge_changes += usize::from(assignments(&inst.spec, &moved) != base);
                for (x, y) in r0.iter().zip(residuals(&moved)) {
                    residual_shift = residual_shift.max((x - y).abs());
                }
            }
        }
    }
    outcome(
        scaling_changes == 0 && gauge_changes == 0 && residual_shift <= 1e-12,
        format!(
            "assignment changes under scaling {scaling_changes}, under translation {gauge_changes}; max residual change {residual_shift:.3e}"
        ),
    )
}

fn determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut differing = 0;
    for k in 0..20 {
        let spec = random_problem(&mut rng, 20 + k, 30 - k / 2, 2, 1.0);
        let maps: Vec<Vec<usize>> = [PivotRule::BlockSearch, PivotRule::Dantzig, PivotRule::FirstEligible]
            .into_iter()
            .map(|pivot| {
                let mut s = DesignSettings::default();
                s.exact.pivot = pivot;
                let d = design(&spec, Kind::TypeA, &s).unwrap();
                assignments(&spec, &d.pair)
            })
            .collect();
        differing += usize::from(maps.windows(2).any(|w| w[0] != w[1]));
    }
    outcome(
        differing == 0,
        format!("20 random instances, 3 pivot rules; instances with differing maps: {differing}"),
    )
}

fn entropic() -> Outcome {
    let (spec, _) = Demo::Stretch1d.problem_with_cells(256).to_spec().unwrap();
    let exact = design(&spec, Kind::TypeA, &DesignSettings::default()).unwrap();
    let mut s = DesignSettings {
        method: Method::Entropic,
        ..Default::default()
    };
    s.entropic.epsilon_rel = 1e-3;
    let ent = design(&spec, Kind::TypeA, &s).unwrap();
    let rel = (ent.solve.plan.cost - exact.solve.plan.cost).abs() / exact.solve.plan.cost;
    let marg = ent.solve.plan.marginal_error(&spec);
    outcome(
        rel <= 0.02 && marg <= 1e-12,
        format!(
            "entropic cost {:.6e} vs exact {:.6e} (rel {rel:.3e}), marginal error {marg:.3e}, {} iterations",
            ent.solve.plan.cost, exact.solve.plan.cost, ent.solve.iterations
        ),
    )
}

fn main() -> ExitCode {
    let suite = suite();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 OPL constancy", Box::new(|| opl_constancy(&suite))),
        ("2 duality identity", Box::new(|| duality_identity(&suite))),
        ("3 1D monotone recovery", Box::new(monotone_recovery)),
        ("4 sandwich property", Box::new(|| sandwich(&suite))),
        ("5 pushforward", Box::new(|| pushforward(&suite))),
        ("6 reflection law", Box::new(|| reflection_law(&suite))),
        ("7 Monge-Ampère residual", Box::new(monge_ampere)),
        ("8 symmetries", Box::new(|| symmetries(&suite))),
        ("9 determinism", Box::new(determinism)),
        ("10 entropic path", Box::new(entropic)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {} [{:.1}s]", o.detail, t.elapsed().as_secs_f64());
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
