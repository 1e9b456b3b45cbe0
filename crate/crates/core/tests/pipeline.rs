//! End-to-end checks: exact focal data against the numerical return map.

use std::f64::consts::PI;

use nilcycle_core::fit::{fit_focal, richardson_leading};
use nilcycle_core::focal::{build_lienard, focal_b, Stability};
use nilcycle_core::ode::OdeOptions;
use nilcycle_core::polar::{geometric_grid, EvalContext, PolarField};
use nilcycle_core::system::{classify_nilpotent, parse_system};

fn make_field(text: &str) -> PolarField {
    let sys = parse_system(text).unwrap();
    PolarField::new(&sys, EvalContext::default(), OdeOptions::default()).unwrap()
}

#[test]
fn family_43_exact_b_against_numeric_sign() {
    // b2 = -1/50: B_3 = 1/75 > 0, so the origin is an unstable focus and
    // the displacement is positive for small x0.
    let text = "kind lienard\ng 3 1\ng 5 1\nf 2 -1/50\n";
    let sys = parse_system(text).unwrap();
    let (g, f) = sys.extract_fg();
    let class = classify_nilpotent(&g, &f).unwrap();
    assert!(class.monodromic);
    let data = build_lienard(&g, &f).unwrap();
    let report = focal_b(&data).unwrap();
    assert_eq!(report.first_odd_nonzero, Some(3));
    assert_eq!(report.stability, Stability::Unstable);

    let field = make_field(text);
    for &x0 in &[0.02, 0.05, 0.1] {
        let (_, d) = field.return_map(x0).unwrap();
        assert!(d > 0.0, "d({x0}) = {d}");
    }
}

#[test]
fn lemma_2_2_symmetry_suite() {
    // (1) r(theta, -r(pi, h)) = -r(pi + (-1)^(n-1) theta, h)
    // (2) r(theta - 2pi, h) = r(theta, r(-2pi, h))
    let cases = [
        ("kind lienard\ng 3 1\ng 5 1\nf 2 1/4\n", 2usize),
        ("kind lienard\ng 5 1\nf 2 1/10\n", 3usize),
    ];
    for (text, n) in cases {
        let field = make_field(text);
        let sgn = if n % 2 == 1 { 1.0 } else { -1.0 };
        for &h in &[0.05, 0.1] {
            let (r_pi, _) = field.integrate_r(0.0, PI, h).unwrap();
            for &theta in &[0.4, 1.0, 2.2, 3.0, -0.7] {
                let (lhs, _) = field.integrate_r(0.0, theta, -r_pi).unwrap();
                let (rhs, _) = field.integrate_r(0.0, PI + sgn * theta, h).unwrap();
                assert!(
                    (lhs + rhs).abs() < 1e-8,
                    "lemma 2.2(1) n={n} h={h} theta={theta}: {lhs} vs {}",
                    -rhs
                );
            }
            let (inner, _) = field.integrate_r(0.0, -2.0 * PI, h).unwrap();
            for &theta in &[0.5, -1.1] {
                let (lhs, _) = field.integrate_r(0.0, theta - 2.0 * PI, h).unwrap();
                let (rhs, _) = field.integrate_r(0.0, theta, inner).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-9,
                    "lemma 2.2(2) n={n} h={h} theta={theta}: {lhs} vs {rhs}"
                );
            }
        }
    }
}

#[test]
fn derivative_at_origin_closed_form_oracle() {
    // x' = y, y' = -x^5 - x^2 y: n = 3, friction leading at x^(n-1), the
    // strong-focus case. P'(0) = exp(-2 pi / (3 sqrt(11))), and the fitted
    // v_1 = P'(0) - 1 must reproduce it to 1e-4.
    let field = make_field("kind lienard\ng 5 1\nf 2 1\n");
    let grid = geometric_grid(1e-3, 0.05, 20);
    let table = field.return_table(&grid);
    assert!(table.failures.is_empty(), "{:?}", table.failures);
    let fit = fit_focal(&table, 5).unwrap();
    let p_prime = 1.0 + fit.v_at(1);
    let oracle = (-2.0 * PI / (3.0 * 11.0f64.sqrt())).exp();
    assert!(
        (p_prime - oracle).abs() < 1e-4,
        "P'(0) fitted {p_prime} vs closed form {oracle} (residual {})",
        fit.residual
    );
    // Richardson extraction cross-checks the fit.
    let lead = richardson_leading(&table, 1);
    assert!(
        (1.0 + lead - oracle).abs() < 1e-4,
        "richardson P'(0) = {}",
        1.0 + lead
    );
}

#[test]
fn even_n_first_focal_value_vanishes() {
    // n = 2: v_1 = 0, so P'(0) = 1 for every monodromic system.
    let field = make_field("kind lienard\ng 3 1\ng 5 1\nf 2 1/4\n");
    let grid = geometric_grid(1e-3, 0.05, 20);
    let table = field.return_table(&grid);
    assert!(table.failures.is_empty());
    let fit = fit_focal(&table, 5).unwrap();
    assert!(
        fit.v_at(1).abs() < 1e-8,
        "v_1 = {} (should vanish for even n)",
        fit.v_at(1)
    );
}
