use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fanocert::arith::{QuadExt, Rat};
use fanocert::catalog::Suite;
use fanocert::chains::{chain_closed_form, chain_value, parse_chain, threshold_m};
use fanocert::lpsolve::{decide_relaxed, verify_certificate, FeasibilityResult};
use fanocert::optimize::{estimate_sides, min_on_triangle, min_quadratic_on_hyperplane, Objective, PhiCase, TriangleRegion};
use fanocert::resgraph::{self, Levels};
use fanocert::sysmodel::{parse_system, print_system};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn q(x: Rat) -> QuadExt {
    QuadExt::from_rat(x)
}

fn rat_strategy(max: i64, den: i64) -> impl Strategy<Value = Rat> {
    (-max * den..=max * den).prop_map(move |n| r(n, den))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// value(nν, nθ; n) = n²·value(ν, θ; 1)
    #[test]
    fn objectives_are_homogeneous(nu in rat_strategy(5, 7), t in 1i64..40, n in 1i64..30, nd in 1i64..5) {
        let theta = Rat::one() + r(t, 8);
        let n = r(n, nd);
        for obj in [Objective::PlainNF, Objective::ClampedNF] {
            let base = obj.eval(&q(nu.clone()), &q(theta.clone())).unwrap();
            let scaled = obj.eval_scaled(&q(&nu * &n), &q(&theta * &n), &q(n.clone())).unwrap();
            prop_assert_eq!(scaled, base * q(&n * &n));
        }
    }

    #[test]
    fn telescoping_products(a in 2i64..150, len in 1i64..50) {
        let b = (a + len).min(200);
        let c = parse_chain(&format!("name: t\nanchor: a\ndomain: M >= 1\ninitial: 1\nfactors: telescope({a}..{b})\nbound: 1\n")).unwrap();
        let prod: Rat = (a..=b).map(|i| r(i + 1, i)).product();
        prop_assert_eq!(chain_value(&c, 1).unwrap(), prod.clone());
        prop_assert_eq!(prod, r(b + 1, a));
    }

    #[test]
    fn dp_matches_enumeration_on_random_graphs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = resgraph::random_graph(&mut rng, 10, Levels::Four);
        let report = resgraph::check_graph(&g);
        prop_assert_eq!(report.violations(), 0, "{}", g);
        let nu = resgraph::random_multiplicities(&mut rng, g.k());
        prop_assert!(nu[1..].windows(2).all(|w| w[0] >= w[1]));
        let b = resgraph::counting_mult_bound(&g, &nu).unwrap();
        prop_assert!(!b.is_negative());
    }

    #[test]
    fn graph_text_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = resgraph::random_graph(&mut rng, 12, Levels::Three);
        let back: resgraph::ResolutionGraph = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }

    /// The minimum of `Σ pᵢνᵢ²` on the hyperplane is below every point of it.
    #[test]
    fn hyperplane_minimum_is_a_lower_bound(p in proptest::collection::vec(1i64..6, 2..6), c in 1i64..40, nu1 in 0i64..5, shift in proptest::collection::vec(-3i64..4, 5)) {
        let p: Vec<Rat> = p.into_iter().map(|x| r(x, 1)).collect();
        let (theta, min) = min_quadratic_on_hyperplane(&p, &Rat::from_integer(c.into()), &Rat::from_integer(nu1.into())).unwrap();
        // perturb along the hyperplane: ν_i = θ + s_i with Σ_{i≥2} p_i s_i = 0
        let k = p.len();
        let mut s: Vec<Rat> = (1..k).map(|i| r(shift[i - 1], 3)).collect();
        let w: Rat = (1..k).map(|i| &p[i] * &s[i - 1]).sum();
        let tail: Rat = p[1..].iter().cloned().sum();
        for x in s.iter_mut() {
            *x -= &w / &tail;
        }
        let val: Rat = &p[0] * Rat::from_integer(nu1.into()).pow(2) + (1..k).map(|i| &p[i] * (&theta + &s[i - 1]).pow(2)).sum::<Rat>();
        prop_assert!(val >= min);
    }

    #[test]
    fn dsl_round_trip_on_random_rows(coeffs in proptest::collection::vec((-9i64..10, -9i64..10, 1i64..20, 0usize..3), 1..6)) {
        let rel = ["<=", ">=", "<"];
        let body: Vec<String> = coeffs.iter().map(|&(a, b, c, k)| format!("{}*x + {b}*M/(M-2)*y {} {c};", if a == 0 && b == 0 { 1 } else { a }, rel[k])).collect();
        let src = format!("param M in [4, inf);\nvar x, y >= 0;\n{}\n", body.join("\n"));
        let s = parse_system("rand", &src).unwrap();
        let again = parse_system("rand", &print_system(&s)).unwrap();
        prop_assert_eq!(print_system(&again), print_system(&s));
    }
}

#[test]
fn catalog_round_trip() {
    let suite = Suite::embedded();
    for name in suite.system_names() {
        let s = suite.system(&name).unwrap();
        let printed = print_system(&s);
        let again = parse_system(&name, &printed).unwrap();
        assert_eq!(print_system(&again), printed, "{name}");
        assert_eq!(again.row_counts(), s.row_counts());
    }
}

fn f(x: &Rat) -> f64 {
    x.to_f64().unwrap()
}

/// Projected gradient on `{Σ_{i≥2} pᵢνᵢ = C − p₁ν₁}`: the gradient of
/// `Σ pᵢνᵢ²` is projected onto the hyperplane in the `p`-weighted metric.
fn qp_oracle(p: &[f64], c: f64, nu1: f64) -> f64 {
    let tail = &p[1..];
    let rhs = c - p[0] * nu1;
    let sp: f64 = tail.iter().sum();
    // start at a feasible, deliberately uneven point
    let mut x: Vec<f64> = (0..tail.len()).map(|i| if i == 0 { rhs / tail[0] } else { 0.0 }).collect();
    let step = 0.25;
    for _ in 0..20_000 {
        // descent direction in the p-metric is -2x; project: d_i = -2x_i + 2(Σ p_j x_j)/Σp
        let mean = tail.iter().zip(&x).map(|(p, x)| p * x).sum::<f64>() / sp;
        let mut moved = 0.0f64;
        for xi in x.iter_mut() {
            let d = -2.0 * (*xi - mean);
            *xi += step * d;
            moved = moved.max(d.abs());
        }
        if moved < 1e-14 {
            break;
        }
    }
    p[0] * nu1 * nu1 + tail.iter().zip(&x).map(|(p, x)| p * x * x).sum::<f64>()
}

#[test]
fn hyperplane_matches_numeric_qp() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..200 {
        let k = rng.gen_range(2..8);
        let p: Vec<Rat> = (0..k).map(|_| r(rng.gen_range(1..20), rng.gen_range(1..4))).collect();
        let c = r(rng.gen_range(1..200), rng.gen_range(1..5));
        let nu1 = r(rng.gen_range(0..20), rng.gen_range(1..5));
        let (_, exact) = min_quadratic_on_hyperplane(&p, &c, &nu1).unwrap();
        let pf: Vec<f64> = p.iter().map(f).collect();
        let num = qp_oracle(&pf, f(&c), f(&nu1));
        let e = f(&exact);
        assert!((num - e).abs() <= 1e-9 * e.abs().max(1.0), "{p:?} {c} {nu1}: {num} vs {e}");
    }
}

/// Random rational points of a region (rejection sampling in the box
/// `2 <= ν <= 3`, `1 < θ <= 3/2`, which holds both triangles).
fn sample(region: &TriangleRegion, rng: &mut ChaCha8Rng, count: usize) -> Vec<(QuadExt, QuadExt)> {
    let mut out = Vec::new();
    while out.len() < count {
        let nu = q(r(rng.gen_range(2000..=3000), 1000));
        let theta = q(r(rng.gen_range(1001..=1500), 1000));
        if region.contains(&nu, &theta) {
            out.push((nu, theta));
        }
    }
    out
}

#[test]
fn minimum_below_sampled_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    for (obj, src) in [(Objective::PlainNF, "theta > 1; nu <= 3; 5*theta <= 2*nu"), (Objective::ClampedNF, "theta > 1; nu <= 3; 2*theta <= nu")] {
        let region = TriangleRegion::parse(src).unwrap();
        let res = min_on_triangle(obj, &region).unwrap();
        let w = res.witness.as_ref().unwrap();
        assert!(w.lower >= res.value.to_f64() - 1e-9);
        for (nu, theta) in sample(&region, &mut rng, 10_000) {
            assert!(obj.eval(&nu, &theta).unwrap() >= res.value, "{obj:?} at ({nu}, {theta})");
        }
    }
}

/// With `m₁ = 8, m₂ = 4` the three-level estimate fails everywhere on the
/// nonnegative orthant: `LHS − RHS ≤ 0`.
#[test]
fn three_level_estimate_fails_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let (lhs, rhs) = estimate_sides(PhiCase::ThreeLevel, &r(8, 1), &r(4, 1));
    let (lhs4, rhs4) = estimate_sides(PhiCase::FourLevel, &r(12, 1), &r(4, 1));
    for _ in 0..1000 {
        let x: Vec<Rat> = (0..4).map(|_| r(rng.gen_range(0..100), rng.gen_range(1..10))).collect();
        assert!(lhs.eval(&x) - rhs.eval(&x) <= Rat::zero(), "{x:?}");
        let y: Vec<Rat> = (0..5).map(|_| r(rng.gen_range(0..100), rng.gen_range(1..10))).collect();
        assert!(lhs4.eval(&y) - rhs4.eval(&y) <= Rat::zero(), "{y:?}");
    }
}

/// Two variables in the nonnegative quadrant and random `<=` rows: the set is
/// nonempty iff some vertex (intersection of two boundary lines) is feasible.
#[test]
fn feasibility_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..300 {
        let rows: Vec<(i64, i64, i64)> = (0..rng.gen_range(1..5)).map(|_| (rng.gen_range(-5..6), rng.gen_range(-5..6), rng.gen_range(-6..7)))
            .filter(|&(a, b, _)| a != 0 || b != 0)
            .collect();
        if rows.is_empty() {
            continue;
        }
        let src = format!(
            "var x, y >= 0;\n{}",
            rows.iter().map(|(a, b, c)| format!("{a}*x + {b}*y <= {c};\n")).collect::<String>()
        );
        let s = parse_system("rand", &src).unwrap();
        let mut lines: Vec<(Rat, Rat, Rat)> = rows.iter().map(|&(a, b, c)| (r(a, 1), r(b, 1), r(c, 1))).collect();
        lines.push((r(1, 1), r(0, 1), r(0, 1)));
        lines.push((r(0, 1), r(1, 1), r(0, 1)));
        let ok = |x: &Rat, y: &Rat| !x.is_negative() && !y.is_negative() && rows.iter().all(|&(a, b, c)| r(a, 1) * x + r(b, 1) * y <= r(c, 1));
        let mut oracle = false;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, c1) = &lines[i];
                let (a2, b2, c2) = &lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.is_zero() {
                    continue;
                }
                let x = (c1 * b2 - c2 * b1) / &det;
                let y = (a1 * c2 - a2 * c1) / &det;
                oracle |= ok(&x, &y);
            }
        }
        match decide_relaxed(&s).unwrap() {
            FeasibilityResult::Feasible { point } => {
                assert!(oracle, "{src}");
                assert!(ok(&point[0].1.as_rat().unwrap().clone(), &point[1].1.as_rat().unwrap().clone()));
            }
            FeasibilityResult::Infeasible(c) => {
                assert!(!oracle, "{src}");
                assert!(verify_certificate(&s, &c).unwrap());
            }
        }
    }
}

#[test]
fn chain_thresholds_are_consistent() {
    let suite = Suite::embedded();
    for e in &suite.catalog.chain {
        let c = suite.chain(&e.name).unwrap();
        let closed = chain_closed_form(&c).unwrap();
        for m in c.domain_lo..c.domain_lo + 60 {
            assert_eq!(closed.eval_int(m).unwrap(), chain_value(&c, m).unwrap());
        }
        let t = threshold_m(&c).unwrap();
        if let Some(ge) = t.ge {
            assert!(chain_value(&c, ge).unwrap() >= c.comparison_bound);
            if ge > c.domain_lo {
                assert!(chain_value(&c, ge - 1).unwrap() < c.comparison_bound);
            }
        }
        if let Some(gt) = t.gt {
            assert!(chain_value(&c, gt).unwrap() > c.comparison_bound);
        }
    }
}
