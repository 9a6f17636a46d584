//! The check suites behind the CLI commands and the acceptance gate.
//!
//! Each suite draws its inputs from a seeded generator, computes the same
//! quantity by independent routes, and reports per-identity worst residuals
//! as [`CheckRecord`]s. Module errors surface as failed records, never as
//! panics.

use std::collections::BTreeMap;

use crate::ed::{energy, energy_under_motion, EDSystem};
use crate::error::Result;
use crate::exterior::{
    coefficient_residual, linear_combination, max_pointwise_deviation, DifferentialForm,
    VectorField,
};
use crate::flows::{lie_derivative, lie_fd_oracle, pullback, sample_points, Motion};
use crate::force::{force, force_cartan, force_with_motion};
use crate::poly::Polynomial;
use crate::quadrature::{
    integrate_scalar, integrate_volume, stokes_residual, BoxDomain, QuadratureRule, Region,
};
use crate::r3;
use crate::reduction::{
    electrostatic_force_terms, magnetostatic_force_terms, magnetostatic_pointwise_residual,
    transported_energy_p1, ElectricConvention,
};
use crate::report::{CheckRecord, Report};
use crate::rng::{random_form, random_polynomial, random_system, random_vector_field, Rng};
use crate::scenario::{Scenario, Tolerances};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Identities,
    Energy,
    Force,
    ReduceP0,
    ReduceP1,
    All,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Identities => "identities",
            Command::Energy => "energy",
            Command::Force => "force",
            Command::ReduceP0 => "reduce-p0",
            Command::ReduceP1 => "reduce-p1",
            Command::All => "all",
        }
    }
}

/// Run a command against a validated scenario and assemble the report.
pub fn run(command: Command, scenario: &Scenario) -> Report {
    let tols = scenario.tolerances;
    let seed = scenario.seed;
    let mut checks = Vec::new();
    match command {
        Command::Identities => checks.extend(identity_suite(seed, &tols)),
        Command::Energy => checks.extend(energy_checks(scenario)),
        Command::Force => checks.extend(force_checks(scenario)),
        Command::ReduceP0 => checks.extend(reduce_p0_checks(scenario, true)),
        Command::ReduceP1 => checks.extend(reduce_p1_checks(scenario, true)),
        Command::All => {
            checks.extend(identity_suite(seed, &tols));
            checks.extend(energy_checks(scenario));
            checks.extend(force_checks(scenario));
            checks.extend(reduce_p0_checks(scenario, false));
            checks.extend(reduce_p1_checks(scenario, false));
        }
    }
    Report::new(
        command.name(),
        seed,
        scenario.quad_order,
        scenario.fd_step,
        checks,
        scenario.warnings.clone(),
    )
}

/// The full seeded property suite behind the `identities` command.
pub fn identity_suite(seed: u64, tols: &Tolerances) -> Vec<CheckRecord> {
    let mut checks = exterior_identity_checks(seed, 200, tols);
    checks.extend(bridge_identity_checks(seed, 100, tols));
    checks.extend(flow_identity_checks(seed, 12, tols));
    checks.extend(stokes_region_checks(seed, 30, tols));
    checks
}

fn rel(residual: f64, scale: f64) -> f64 {
    residual / scale
}

fn form_scale(a: &DifferentialForm, b: &DifferentialForm) -> f64 {
    1.0 + a.max_abs_coeff() + b.max_abs_coeff()
}

fn vec_residual(a: &VectorField, b: &VectorField) -> f64 {
    (1..=a.dim())
        .map(|i| (a.component(i) - b.component(i)).max_abs_coeff())
        .fold(0.0, f64::max)
}

fn vec_scale(a: &VectorField, b: &VectorField) -> f64 {
    let m = |v: &VectorField| {
        (1..=v.dim())
            .map(|i| v.component(i).max_abs_coeff())
            .fold(0.0, f64::max)
    };
    1.0 + m(a) + m(b)
}

/// Graded anticommutativity, Leibniz, nilpotency, contraction antiderivation
/// and double contraction, on `count` random forms over n ∈ {2, 3, 4} with
/// degree ≤ 3 coefficients.
pub fn exterior_identity_checks(seed: u64, count: usize, tols: &Tolerances) -> Vec<CheckRecord> {
    let mut rng = Rng::new(seed ^ 0x45585445);
    let mut worst: BTreeMap<&str, f64> = BTreeMap::new();
    let dims = [2usize, 3, 4];
    for draw in 0..count {
        let n = dims[draw % dims.len()];
        let k = rng.below(n + 1);
        let l = rng.below(n + 1 - k);
        let omega = random_form(&mut rng, n, k, 3);
        let eta = random_form(&mut rng, n, l, 3);
        let v = random_vector_field(&mut rng, n, 3);

        // ω∧η = (−1)^{kl} η∧ω
        let lhs = omega.wedge(&eta).unwrap();
        let rhs = eta
            .wedge(&omega)
            .unwrap()
            .scaled(if (k * l).is_multiple_of(2) { 1.0 } else { -1.0 });
        track(&mut worst, "anticommutativity", &lhs, &rhs);

        // d(ω∧η) = dω∧η + (−1)^k ω∧dη; k + l < n keeps every exterior
        // derivative below the top grade
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        if k + l < n {
            let lhs = omega.wedge(&eta).unwrap().d();
            let rhs = linear_combination(
                1.0,
                &omega.d().wedge(&eta).unwrap(),
                sign,
                &omega.wedge(&eta.d()).unwrap(),
            )
            .unwrap();
            track(&mut worst, "leibniz", &lhs, &rhs);
        }

        // d∘d = 0
        let dd = omega.d().d();
        let zero = DifferentialForm::zero(dd.dim(), dd.grade());
        track(&mut worst, "nilpotency", &dd, &zero);

        // v⌟(ω∧η) = (v⌟ω)∧η + (−1)^k ω∧(v⌟η), needs both grades ≥ 1
        if k >= 1 && l >= 1 && k + l <= n {
            let lhs = omega.wedge(&eta).unwrap().contract(&v).unwrap();
            let rhs = linear_combination(
                1.0,
                &omega.contract(&v).unwrap().wedge(&eta).unwrap(),
                sign,
                &omega.wedge(&eta.contract(&v).unwrap()).unwrap(),
            )
            .unwrap();
            track(&mut worst, "contraction_antiderivation", &lhs, &rhs);
        }

        // v⌟(v⌟ω) = 0
        if k >= 2 {
            let vv = omega.contract(&v).unwrap().contract(&v).unwrap();
            let zero = DifferentialForm::zero(vv.dim(), vv.grade());
            track(&mut worst, "double_contraction", &vv, &zero);
        }
    }
    worst
        .into_iter()
        .map(|(name, max_rel)| {
            CheckRecord::new(format!("exterior.{name}"), tols.coeff_rel)
                .residual("max_rel", max_rel)
                .judge()
        })
        .collect()
}

fn track(worst: &mut BTreeMap<&str, f64>, key: &'static str, a: &DifferentialForm, b: &DifferentialForm) {
    let r = rel(coefficient_residual(a, b).unwrap(), form_scale(a, b));
    let e = worst.entry(key).or_insert(0.0);
    *e = e.max(r);
}

/// The R^3 dictionary identities on `count` random field draws.
pub fn bridge_identity_checks(seed: u64, count: usize, tols: &Tolerances) -> Vec<CheckRecord> {
    let mut rng = Rng::new(seed ^ 0x42524447);
    let mut worst: BTreeMap<&str, f64> = BTreeMap::new();
    let track_vec = |worst: &mut BTreeMap<&str, f64>, key: &'static str, a: &VectorField, b: &VectorField| {
        let r = rel(vec_residual(a, b), vec_scale(a, b));
        let e = worst.entry(key).or_insert(0.0);
        *e = e.max(r);
    };
    for _ in 0..count {
        let a = random_vector_field(&mut rng, 3, 4);
        let b = random_vector_field(&mut rng, 3, 4);
        let gamma = random_form(&mut rng, 3, 2, 4);
        let v = random_vector_field(&mut rng, 3, 4);

        // proxy(α∧β) = α♯ × β♯
        let alpha = r3::flat(&a).unwrap();
        let beta = r3::flat(&b).unwrap();
        let lhs = r3::proxy_of_2form(&alpha.wedge(&beta).unwrap()).unwrap();
        let rhs = r3::cross(&a, &b).unwrap();
        track_vec(&mut worst, "exterior_cross", &lhs, &rhs);

        // (v⌟γ)♯ = γ̄ × v
        let lhs = r3::sharp(&gamma.contract(&v).unwrap()).unwrap();
        let rhs = r3::cross(&r3::proxy_of_2form(&gamma).unwrap(), &v).unwrap();
        track_vec(&mut worst, "contraction_cross", &lhs, &rhs);

        // density(d(v⌟dV)) = ∇·v
        let lhs = r3::density_of_3form(&r3::proxy_to_2form(&v).unwrap().d()).unwrap();
        let rhs = r3::div(&v).unwrap();
        let r = rel(
            (&lhs - &rhs).max_abs_coeff(),
            1.0 + lhs.max_abs_coeff() + rhs.max_abs_coeff(),
        );
        let e = worst.entry("divergence").or_insert(0.0);
        *e = e.max(r);

        // proxy(dα) = ∇×α♯
        let lhs = r3::proxy_of_2form(&alpha.d()).unwrap();
        let rhs = r3::curl(&a).unwrap();
        track_vec(&mut worst, "curl", &lhs, &rhs);

        // γ̄^l = ½ ε^{ljk} γ_{jk} with the full antisymmetric coefficient array
        let proxy = r3::proxy_of_2form(&gamma).unwrap();
        let full = |j: usize, k: usize| -> Polynomial {
            use std::cmp::Ordering;
            match j.cmp(&k) {
                Ordering::Less => gamma.coeff_of(&[j, k]),
                Ordering::Greater => gamma.coeff_of(&[k, j]).scaled(-1.0),
                Ordering::Equal => Polynomial::zero(3),
            }
        };
        let mut eps_worst = 0.0f64;
        for l in 1..=3 {
            let mut acc = Polynomial::zero(3);
            for j in 1..=3 {
                for k in 1..=3 {
                    let e = r3::levi_civita(l, j, k);
                    if e != 0 {
                        acc = &acc + &full(j, k).scaled(0.5 * e as f64);
                    }
                }
            }
            let r = rel(
                (&acc - proxy.component(l)).max_abs_coeff(),
                1.0 + acc.max_abs_coeff(),
            );
            eps_worst = eps_worst.max(r);
        }
        let e = worst.entry("eps_delta").or_insert(0.0);
        *e = e.max(eps_worst);

        // ε_{lpq} (∇×α♯)_l = α_{q,p} − α_{p,q}
        let curl_a = r3::curl(&a).unwrap();
        let mut comp_worst = 0.0f64;
        for p in 1..=3 {
            for q in 1..=3 {
                let mut lhs = Polynomial::zero(3);
                for l in 1..=3 {
                    let e = r3::levi_civita(l, p, q);
                    if e != 0 {
                        lhs = &lhs + &curl_a.component(l).scaled(e as f64);
                    }
                }
                let rhs = &a.component(q).partial(p).unwrap() - &a.component(p).partial(q).unwrap();
                let r = rel(
                    (&lhs - &rhs).max_abs_coeff(),
                    1.0 + lhs.max_abs_coeff() + rhs.max_abs_coeff(),
                );
                comp_worst = comp_worst.max(r);
            }
        }
        let e = worst.entry("curl_components").or_insert(0.0);
        *e = e.max(comp_worst);

        // (L_vα)♯ = (∇×α♯)×v + ∇(α♯·v)
        let lhs = r3::sharp(&lie_derivative(&v, &alpha).unwrap()).unwrap();
        let rhs = r3::cross(&r3::curl(&a).unwrap(), &v)
            .unwrap()
            .try_add(&VectorField::gradient(&r3::dot(&a, &v).unwrap()))
            .unwrap();
        track_vec(&mut worst, "lie_sharp", &lhs, &rhs);

        // ∇×(u×w) = [∇u − (∇·u)I]·w − [∇w − (∇·w)I]·u
        let lhs = r3::curl(&r3::cross(&a, &b).unwrap()).unwrap();
        let rhs = grad_matrix_apply(&a, &b)
            .try_add(&grad_matrix_apply(&b, &a).scaled(-1.0))
            .unwrap();
        track_vec(&mut worst, "curl_of_cross", &lhs, &rhs);

        // ∇·(u×w) = (∇×u)·w − u·(∇×w)
        let lhs = r3::div(&r3::cross(&a, &b).unwrap()).unwrap();
        let rhs = &r3::dot(&r3::curl(&a).unwrap(), &b).unwrap()
            - &r3::dot(&a, &r3::curl(&b).unwrap()).unwrap();
        let r = rel(
            (&lhs - &rhs).max_abs_coeff(),
            1.0 + lhs.max_abs_coeff() + rhs.max_abs_coeff(),
        );
        let e = worst.entry("div_of_cross").or_insert(0.0);
        *e = e.max(r);
    }
    worst
        .into_iter()
        .map(|(name, max_rel)| {
            CheckRecord::new(format!("bridge.{name}"), tols.coeff_rel)
                .residual("max_rel", max_rel)
                .judge()
        })
        .collect()
}

/// [∇u − (∇·u)I]·w componentwise: Σ_j u_{i,j} w_j − (∇·u) w_i.
fn grad_matrix_apply(u: &VectorField, w: &VectorField) -> VectorField {
    let div_u = r3::div(u).expect("dim 3");
    VectorField::new(
        (1..=3)
            .map(|i| {
                let mut acc = Polynomial::zero(3);
                for j in 1..=3 {
                    acc = &acc + &(&u.component(i).partial(j).unwrap() * w.component(j));
                }
                &acc - &(&div_u * w.component(i))
            })
            .collect(),
    )
    .expect("dim 3")
}

/// Pullback naturality, Lie product rules, Cartan vs finite-difference flow
/// (with measured convergence order), and motion-independence of the limit.
pub fn flow_identity_checks(seed: u64, draws: usize, tols: &Tolerances) -> Vec<CheckRecord> {
    let mut rng = Rng::new(seed ^ 0x464c4f57);
    let mut checks = Vec::new();
    let points = sample_points(3, tol::SAMPLE_COUNT);

    let mut worst: BTreeMap<&str, f64> = BTreeMap::new();
    let mut max_dev = 0.0f64;
    let mut order_span: Option<(f64, f64)> = None;
    let mut ratio_defect = 0.0f64;

    for _ in 0..draws {
        let k = rng.below(3);
        let l = rng.below(3);
        let omega = random_form(&mut rng, 3, k, 3).scaled(0.5);
        let eta = random_form(&mut rng, 3, l, 3).scaled(0.5);
        let w = random_vector_field(&mut rng, 3, 2).scaled(0.5);
        let u = random_vector_field(&mut rng, 3, 2).scaled(0.5);
        let psi = Motion::linear(w.clone()).at(0.5);

        // ψ*(ω∧η) = ψ*ω ∧ ψ*η
        let lhs = pullback(&psi, &omega.wedge(&eta).unwrap()).unwrap();
        let rhs = pullback(&psi, &omega)
            .unwrap()
            .wedge(&pullback(&psi, &eta).unwrap())
            .unwrap();
        track(&mut worst, "pullback_wedge", &lhs, &rhs);

        // ψ*(dω) = d(ψ*ω)
        let lhs = pullback(&psi, &omega.d()).unwrap();
        let rhs = pullback(&psi, &omega).unwrap().d();
        track(&mut worst, "pullback_d", &lhs, &rhs);

        // ψ*dV = det(Dψ) dV
        let lhs = pullback(&psi, &DifferentialForm::volume(3)).unwrap();
        let rhs = DifferentialForm::volume(3)
            .poly_scaled(&psi.jacobian_det())
            .unwrap();
        track(&mut worst, "pullback_volume", &lhs, &rhs);

        // L_v(ω∧η) = L_vω∧η + ω∧L_vη
        let lhs = lie_derivative(&w, &omega.wedge(&eta).unwrap()).unwrap();
        let rhs = lie_derivative(&w, &omega)
            .unwrap()
            .wedge(&eta)
            .unwrap()
            .try_add(&omega.wedge(&lie_derivative(&w, &eta).unwrap()).unwrap())
            .unwrap();
        track(&mut worst, "lie_wedge", &lhs, &rhs);

        // L_v dω = d L_vω
        let lhs = lie_derivative(&w, &omega.d()).unwrap();
        let rhs = lie_derivative(&w, &omega).unwrap().d();
        track(&mut worst, "lie_d_commute", &lhs, &rhs);

        // Cartan route vs flow oracle at t = LIE_FD_STEP, plus order fit
        let motion = Motion::linear(w.clone());
        let cartan = lie_derivative(&w, &omega).unwrap();
        let t = tol::LIE_FD_STEP;
        let d1 = max_pointwise_deviation(
            &lie_fd_oracle(&motion, &omega, t).unwrap(),
            &cartan,
            &points,
        )
        .unwrap();
        let d2 = max_pointwise_deviation(
            &lie_fd_oracle(&motion, &omega, t / 2.0).unwrap(),
            &cartan,
            &points,
        )
        .unwrap();
        max_dev = max_dev.max(d1);
        if d1 > 1e-11 && d2 > 1e-12 {
            let order = (d1 / d2).log2();
            order_span = Some(match order_span {
                None => (order, order),
                Some((lo, hi)) => (lo.min(order), hi.max(order)),
            });
        }

        // motion independence: oracles for the same generator but different
        // second-order terms deviate by O(t), so dev(t)/t must not grow as
        // the step shrinks a decade
        let curved = Motion::with_second_order(w.clone(), u).unwrap();
        let coarse = max_pointwise_deviation(
            &lie_fd_oracle(&motion, &omega, 1e-3).unwrap(),
            &lie_fd_oracle(&curved, &omega, 1e-3).unwrap(),
            &points,
        )
        .unwrap();
        let fine = max_pointwise_deviation(
            &lie_fd_oracle(&motion, &omega, 1e-4).unwrap(),
            &lie_fd_oracle(&curved, &omega, 1e-4).unwrap(),
            &points,
        )
        .unwrap();
        if coarse > 1e-10 && fine > 1e-14 {
            ratio_defect = ratio_defect.max((fine / 1e-4) / (coarse / 1e-3));
        }
    }

    for (name, max_rel) in worst {
        checks.push(
            CheckRecord::new(format!("flows.{name}"), tols.coeff_rel)
                .residual("max_rel", max_rel)
                .judge(),
        );
    }

    let mut cartan_check = CheckRecord::new("flows.cartan_vs_flow", tols.lie_fd_abs)
        .residual("max_deviation", max_dev)
        .judge();
    if let Some((lo, hi)) = order_span {
        cartan_check = cartan_check.order(Some(if (2.0 - lo).abs() > (hi - 2.0).abs() {
            lo
        } else {
            hi
        }));
        if lo < tol::ORDER_MIN || hi > tol::ORDER_MAX {
            cartan_check.pass = false;
        }
    }
    checks.push(cartan_check);

    checks.push(
        CheckRecord::new("flows.motion_independence", 1.5)
            .residual("per_step_bound_growth", ratio_defect)
            .judge(),
    );
    checks
}

/// Divergence-theorem residuals on random forms over unit boxes and box
/// chains, including the interior-face-cancellation comparison.
pub fn stokes_region_checks(seed: u64, draws: usize, tols: &Tolerances) -> Vec<CheckRecord> {
    let mut rng = Rng::new(seed ^ 0x53544f4b);
    let mut max_rel_residual = 0.0f64;
    let mut max_chain_rel = 0.0f64;
    let dims = [2usize, 3, 4];
    for draw in 0..draws {
        let n = dims[draw % dims.len()];
        let omega = random_form(&mut rng, n, n - 1, 3);
        let rule = QuadratureRule::default().raised_for(&omega);

        let unit = Region::unit_box(n);
        let volume = integrate_volume(&omega.d(), &unit, &rule).unwrap();
        let res = stokes_residual(&omega, &unit, &rule).unwrap();
        max_rel_residual = max_rel_residual.max(res / tol::scale_of(&[volume]));

        // chain of two adjacent boxes vs their union
        let mut hi = vec![1.0; n];
        hi[0] = 2.0;
        let mut lo2 = vec![0.0; n];
        lo2[0] = 1.0;
        let chain = Region::new(vec![
            BoxDomain::new(vec![0.0; n], vec![1.0; n]).unwrap(),
            BoxDomain::new(lo2, hi.clone()).unwrap(),
        ])
        .unwrap();
        let merged = Region::single(BoxDomain::new(vec![0.0; n], hi).unwrap());
        let res_chain = stokes_residual(&omega, &chain, &rule).unwrap();
        let vol_chain = integrate_volume(&omega.d(), &chain, &rule).unwrap();
        max_rel_residual = max_rel_residual.max(res_chain / tol::scale_of(&[vol_chain]));

        let b_chain = crate::quadrature::integrate_boundary(&omega, &chain, &rule).unwrap();
        let b_merged = crate::quadrature::integrate_boundary(&omega, &merged, &rule).unwrap();
        max_chain_rel =
            max_chain_rel.max((b_chain - b_merged).abs() / tol::scale_of(&[b_chain, b_merged]));
    }
    vec![
        CheckRecord::new("stokes.residual", tols.stokes_rel)
            .residual("max_rel", max_rel_residual)
            .judge(),
        CheckRecord::new("stokes.chain_cancellation", tols.stokes_rel)
            .residual("max_rel", max_chain_rel)
            .judge(),
    ]
}

/// Energy route agreement and structural Maxwell residuals on random
/// systems, `per_p` draws for each p ∈ {0, 1, 2} in R^3.
pub fn random_energy_checks(seed: u64, per_p: usize, tols: &Tolerances) -> Vec<CheckRecord> {
    let mut rng = Rng::new(seed ^ 0x454e4552);
    let region = Region::unit_box(3);
    let rule = QuadratureRule::default();
    let mut route_worst = 0.0f64;
    let mut maxwell_worst = (0.0f64, 0.0f64);
    for p in [0usize, 1, 2] {
        for _ in 0..per_p {
            let sys = random_system(&mut rng, 3, p, 3);
            match energy(&sys, &region, &rule) {
                Ok(report) => {
                    route_worst = route_worst.max(report.max_residual() / report.scale());
                }
                Err(e) => {
                    return vec![CheckRecord::failed("energy.random_routes", &e)];
                }
            }
            let (df, dj) = sys.maxwell_residual();
            maxwell_worst = (maxwell_worst.0.max(df), maxwell_worst.1.max(dj));
        }
    }
    vec![
        CheckRecord::new("energy.random_routes", tols.route_rel)
            .residual("max_rel", route_worst)
            .judge(),
        CheckRecord::new("maxwell.structural", tols.maxwell_abs)
            .residual("max_dF", maxwell_worst.0)
            .residual("max_dJ", maxwell_worst.1)
            .judge(),
    ]
}

/// Force route triangle on random systems: `per_p` draws each of p = 0 and
/// p = 1 in R^3, fields scaled to keep the h² truncation term well inside
/// the fd tolerance.
pub fn random_force_checks(seed: u64, per_p: usize, tols: &Tolerances) -> Vec<CheckRecord> {
    let mut rng = Rng::new(seed ^ 0x464f5243);
    let region = Region::unit_box(3);
    let rule = QuadratureRule::default();
    let mut exact_worst = 0.0f64;
    let mut fd_worst = 0.0f64;
    let mut order_min: Option<f64> = None;
    for p in [0usize, 1] {
        for _ in 0..per_p {
            let g = random_form(&mut rng, 3, 3 - p - 1, 2).scaled(0.5);
            let alpha = random_form(&mut rng, 3, p, 2).scaled(0.5);
            let sys = match EDSystem::new(3, p, g, alpha) {
                Ok(s) => s,
                Err(e) => return vec![CheckRecord::failed("force.random_routes", &e)],
            };
            let w = random_vector_field(&mut rng, 3, 2).scaled(0.5);
            let motion = Motion::linear(w);
            match force_with_motion(&sys, &region, &motion, tol::FORCE_FD_STEP, &rule) {
                Ok(report) => {
                    let scale = report.scale();
                    exact_worst = exact_worst
                        .max(report.residuals["cartan_vs_alt"] / scale)
                        .max(report.residuals["cartan_vs_boundary"] / scale);
                    fd_worst = fd_worst.max(report.residuals["cartan_vs_fd"] / scale);
                    if let Some(o) = report.fd_order {
                        order_min = Some(order_min.map_or(o, |m: f64| m.min(o)));
                    }
                }
                Err(e) => return vec![CheckRecord::failed("force.random_routes", &e)],
            }
        }
    }
    let mut fd_check = CheckRecord::new("force.random_fd_route", tols.force_fd_rel)
        .residual("max_rel", fd_worst)
        .order(order_min)
        .judge();
    if let Some(o) = order_min {
        if o < tol::ORDER_MIN {
            fd_check.pass = false;
        }
    }
    vec![
        CheckRecord::new("force.random_exact_routes", tols.route_rel)
            .residual("max_rel", exact_worst)
            .judge(),
        fd_check,
    ]
}

/// Reduction agreement on random R^3 fields: pointwise integrand identity,
/// electrostatic interior-vs-boundary identity, and the term-sum vs the
/// coordinate-free force for both reductions.
pub fn random_reduction_checks(seed: u64, draws: usize, tols: &Tolerances) -> Vec<CheckRecord> {
    let mut rng = Rng::new(seed ^ 0x52454455);
    let region = Region::unit_box(3);
    let rule = QuadratureRule::default();
    let points = sample_points(3, tol::SAMPLE_COUNT);
    let mut pointwise_worst = 0.0f64;
    let mut remark_worst = 0.0f64;
    let mut magneto_worst = 0.0f64;
    let mut electro_worst = 0.0f64;
    for _ in 0..draws {
        let h = random_vector_field(&mut rng, 3, 3);
        let a = random_vector_field(&mut rng, 3, 3);
        let w = random_vector_field(&mut rng, 3, 3);
        let d = random_vector_field(&mut rng, 3, 3);
        let alpha = random_polynomial(&mut rng, 3, 3, 4);

        let out: Result<()> = (|| {
            let pw = magnetostatic_pointwise_residual(&h, &a, &w, &points)?;
            let m_scale = 1.0
                + r3::flat(&h)?
                    .wedge(&lie_derivative(&w, &r3::flat(&a)?)?)?
                    .d()
                    .max_abs_coeff();
            pointwise_worst = pointwise_worst.max(pw / m_scale);

            let terms =
                electrostatic_force_terms(&d, &alpha, &w, &region, &rule, ElectricConvention::MinusGradAlpha)?;
            remark_worst = remark_worst
                .max((terms.interior_sum() - terms.boundary).abs() / terms.scale());

            let sys_p0 = EDSystem::new(
                3,
                0,
                r3::proxy_to_2form(&d)?,
                DifferentialForm::from_scalar(alpha.clone()),
            )?;
            let general = force_cartan(&sys_p0, &region, &w, &rule)?;
            let plus =
                electrostatic_force_terms(&d, &alpha, &w, &region, &rule, ElectricConvention::GradAlpha)?;
            electro_worst = electro_worst.max(
                (plus.interior_sum() - general).abs() / tol::scale_of(&[general, plus.interior_sum()]),
            );

            let m_terms = magnetostatic_force_terms(&h, &a, &w, &region, &rule)?;
            let sys_p1 = EDSystem::new(3, 1, r3::flat(&h)?, r3::flat(&a)?)?;
            let m_general = force_cartan(&sys_p1, &region, &w, &rule)?;
            magneto_worst = magneto_worst.max(
                (m_terms.total() - m_general).abs() / tol::scale_of(&[m_general, m_terms.total()]),
            );
            Ok(())
        })();
        if let Err(e) = out {
            return vec![CheckRecord::failed("reduction.random", &e)];
        }
    }
    vec![
        CheckRecord::new("reduction.pointwise_integrand", tols.pointwise_rel)
            .residual("max_rel", pointwise_worst)
            .judge(),
        CheckRecord::new("reduction.electrostatic_boundary_identity", tols.route_rel)
            .residual("max_rel", remark_worst)
            .judge(),
        CheckRecord::new("reduction.electrostatic_term_sum", tols.reduction_rel)
            .residual("max_rel", electro_worst)
            .judge(),
        CheckRecord::new("reduction.magnetostatic_term_sum", tols.reduction_rel)
            .residual("max_rel", magneto_worst)
            .judge(),
    ]
}

/// The hand-derived golden cases.
pub fn golden_checks(tols: &Tolerances) -> Vec<CheckRecord> {
    let region = Region::unit_box(3);
    let rule = QuadratureRule::default();
    let x = |i: usize| Polynomial::var(3, i);
    let mut checks = Vec::new();

    // electrostatic box: D = (1,0,0), α = x1 → P = 1 by all routes
    let run = || -> Result<CheckRecord> {
        let d = VectorField::constant(&[1.0, 0.0, 0.0]);
        let sys = EDSystem::new(
            3,
            0,
            r3::proxy_to_2form(&d)?,
            DifferentialForm::from_scalar(x(1)),
        )?;
        let e = energy(&sys, &region, &rule)?;
        Ok(CheckRecord::new("golden.electrostatic_energy", tols.golden_abs)
            .route("volume", e.volume)
            .route("boundary", e.boundary)
            .route("split", e.split)
            .residual("volume_vs_one", (e.volume - 1.0).abs())
            .residual("boundary_vs_one", (e.boundary - 1.0).abs())
            .residual("split_vs_one", (e.split - 1.0).abs())
            .judge())
    };
    checks.push(run().unwrap_or_else(|e| CheckRecord::failed("golden.electrostatic_energy", &e)));

    // magnetostatic box: H = (0,0,1), α♯ = (0,x1,0) → P = −1 by all routes
    let run = || -> Result<CheckRecord> {
        let h = VectorField::constant(&[0.0, 0.0, 1.0]);
        let a = VectorField::new(vec![Polynomial::zero(3), x(1), Polynomial::zero(3)])?;
        let sys = EDSystem::new(3, 1, r3::flat(&h)?, r3::flat(&a)?)?;
        let e = energy(&sys, &region, &rule)?;
        Ok(CheckRecord::new("golden.magnetostatic_energy", tols.golden_abs)
            .route("volume", e.volume)
            .route("boundary", e.boundary)
            .route("split", e.split)
            .residual("volume_vs_minus_one", (e.volume + 1.0).abs())
            .residual("boundary_vs_minus_one", (e.boundary + 1.0).abs())
            .residual("split_vs_minus_one", (e.split + 1.0).abs())
            .judge())
    };
    checks.push(run().unwrap_or_else(|e| CheckRecord::failed("golden.magnetostatic_energy", &e)));

    // electrostatic force: D = (1,0,0), α = x1²/2, w = e1 → −1 in the
    // E = −∇α convention, +1 for the coordinate-free route
    let run = || -> Result<CheckRecord> {
        let d = VectorField::constant(&[1.0, 0.0, 0.0]);
        let alpha = x(1).pow(2).scaled(0.5);
        let w = VectorField::constant(&[1.0, 0.0, 0.0]);
        let terms = electrostatic_force_terms(
            &d,
            &alpha,
            &w,
            &region,
            &rule,
            ElectricConvention::MinusGradAlpha,
        )?;
        let sys = EDSystem::new(
            3,
            0,
            r3::proxy_to_2form(&d)?,
            DifferentialForm::from_scalar(alpha),
        )?;
        let general = force(&sys, &region, &w, &rule)?;
        Ok(CheckRecord::new("golden.electrostatic_force", tols.golden_abs)
            .route("term_sum", terms.interior_sum())
            .route("boundary_form", terms.boundary)
            .route("cartan", general.cartan)
            .residual("term_sum_vs_minus_one", (terms.interior_sum() + 1.0).abs())
            .residual("boundary_vs_minus_one", (terms.boundary + 1.0).abs())
            .residual("cartan_vs_plus_one", (general.cartan - 1.0).abs())
            .terms(terms.as_map())
            .judge())
    };
    checks.push(run().unwrap_or_else(|e| CheckRecord::failed("golden.electrostatic_force", &e)));

    // uniform flux with rotation potentials: α♯ = ½B×x, H = ½J×x, w const
    // → grad_alpha term is −½ (J×B)·w · vol(Ω)
    let run = || -> Result<CheckRecord> {
        let b = VectorField::constant(&[1.0, 2.0, 3.0]);
        let j = VectorField::constant(&[4.0, 5.0, 6.0]);
        let pos = VectorField::new(vec![x(1), x(2), x(3)])?;
        let a = r3::cross(&b, &pos)?.scaled(0.5);
        let h = r3::cross(&j, &pos)?.scaled(0.5);
        let w = VectorField::constant(&[7.0, -8.0, 9.0]);
        let terms = magnetostatic_force_terms(&h, &a, &w, &region, &rule)?;
        let jxb_w = r3::dot(&r3::cross(&j, &b)?, &w)?.eval(&[0.0; 3])?;
        let vol = integrate_scalar(&Polynomial::constant(3, 1.0), &region, &rule)?;
        let expect = -0.5 * jxb_w * vol;
        Ok(CheckRecord::new("golden.half_lorentz", tols.golden_abs * tol::scale_of(&[expect]))
            .route("grad_alpha", terms.grad_alpha)
            .route("expected", expect)
            .residual("grad_alpha_vs_expected", (terms.grad_alpha - expect).abs())
            .terms(terms.as_map())
            .judge())
    };
    checks.push(run().unwrap_or_else(|e| CheckRecord::failed("golden.half_lorentz", &e)));

    checks
}

/// Scenario-level energy checks.
pub fn energy_checks(scenario: &Scenario) -> Vec<CheckRecord> {
    let tols = &scenario.tolerances;
    let rule = scenario.rule();
    let mut checks = Vec::new();

    match energy(&scenario.system, &scenario.region, &rule) {
        Ok(e) => {
            let scale = e.scale();
            checks.push(
                CheckRecord::new("energy.routes", tols.route_rel * scale)
                    .route("volume", e.volume)
                    .route("boundary", e.boundary)
                    .route("split", e.split)
                    .residual("volume_vs_boundary", e.residual_volume_boundary())
                    .residual("volume_vs_split", e.residual_volume_split())
                    .judge(),
            );
        }
        Err(e) => checks.push(CheckRecord::failed("energy.routes", &e)),
    }

    let (df, dj) = scenario.system.maxwell_residual();
    checks.push(
        CheckRecord::new("energy.maxwell", tols.maxwell_abs)
            .residual("dF", df)
            .residual("dJ", dj)
            .judge(),
    );

    match scenario.system.traction() {
        Ok(sigma) => {
            let raised = rule.raised_for(&sigma);
            match stokes_residual(&sigma, &scenario.region, &raised) {
                Ok(res) => {
                    let vol = integrate_volume(&sigma.d(), &scenario.region, &raised)
                        .unwrap_or(0.0);
                    checks.push(
                        CheckRecord::new("energy.stokes", tols.stokes_rel * tol::scale_of(&[vol]))
                            .residual("volume_vs_boundary", res)
                            .judge(),
                    );
                }
                Err(e) => checks.push(CheckRecord::failed("energy.stokes", &e)),
            }
        }
        Err(e) => checks.push(CheckRecord::failed("energy.stokes", &e)),
    }

    match (
        energy_under_motion(&scenario.system, &scenario.region, &scenario.motion, 0.0, &rule),
        energy(&scenario.system, &scenario.region, &rule),
    ) {
        (Ok(at_zero), Ok(e)) => {
            checks.push(
                CheckRecord::new(
                    "energy.motion_at_zero",
                    tols.route_rel * tol::scale_of(&[at_zero, e.split]),
                )
                .route("motion_t0", at_zero)
                .route("split", e.split)
                .residual("difference", (at_zero - e.split).abs())
                .judge(),
            );
        }
        (Err(e), _) | (_, Err(e)) => {
            checks.push(CheckRecord::failed("energy.motion_at_zero", &e))
        }
    }

    checks
}

/// Scenario-level force checks.
pub fn force_checks(scenario: &Scenario) -> Vec<CheckRecord> {
    let tols = &scenario.tolerances;
    let rule = scenario.rule();
    let mut checks = Vec::new();
    match force_with_motion(
        &scenario.system,
        &scenario.region,
        &scenario.motion,
        scenario.fd_step,
        &rule,
    ) {
        Ok(report) => {
            let scale = report.scale();
            checks.push(
                CheckRecord::new("force.exact_routes", tols.route_rel * scale)
                    .route("cartan", report.cartan)
                    .route("boundary", report.boundary)
                    .route("alt", report.alt)
                    .residual("cartan_vs_alt", report.residuals["cartan_vs_alt"])
                    .residual("cartan_vs_boundary", report.residuals["cartan_vs_boundary"])
                    .judge(),
            );
            let mut fd_check = CheckRecord::new("force.fd_route", tols.force_fd_rel * scale)
                .route("cartan", report.cartan)
                .route("fd", report.fd)
                .residual("cartan_vs_fd", report.residuals["cartan_vs_fd"])
                .order(report.fd_order)
                .judge();
            if let Some(o) = report.fd_order {
                if o < tol::ORDER_MIN {
                    fd_check.pass = false;
                }
            }
            checks.push(fd_check);
        }
        Err(e) => {
            checks.push(CheckRecord::failed("force.exact_routes", &e));
            checks.push(CheckRecord::failed("force.fd_route", &e));
        }
    }

    // linearity in the velocity
    let run = || -> Result<CheckRecord> {
        let w = scenario.velocity();
        let one = force_cartan(&scenario.system, &scenario.region, w, &rule)?;
        let two = force_cartan(&scenario.system, &scenario.region, &w.scaled(2.0), &rule)?;
        Ok(
            CheckRecord::new("force.linearity", tol::LINEARITY_REL * tol::scale_of(&[one, two]))
                .route("f_w", one)
                .route("f_2w", two)
                .residual("f_2w_vs_2f_w", (two - 2.0 * one).abs())
                .judge(),
        )
    };
    checks.push(run().unwrap_or_else(|e| CheckRecord::failed("force.linearity", &e)));
    checks
}

/// Recover the R^3 proxies of a p = 0 scenario.
fn p0_proxies(scenario: &Scenario) -> Result<(VectorField, Polynomial)> {
    if scenario.system.dim() != 3 || scenario.system.degree() != 0 {
        return Err(crate::error::Error::Scenario(
            "reduce-p0 requires an n = 3, p = 0 scenario".into(),
        ));
    }
    let d = r3::proxy_of_2form(scenario.system.maxwell_form())?;
    let alpha = scenario.system.potential().coeff_of(&[]);
    Ok((d, alpha))
}

fn p1_proxies(scenario: &Scenario) -> Result<(VectorField, VectorField)> {
    if scenario.system.dim() != 3 || scenario.system.degree() != 1 {
        return Err(crate::error::Error::Scenario(
            "reduce-p1 requires an n = 3, p = 1 scenario".into(),
        ));
    }
    Ok((
        r3::sharp(scenario.system.maxwell_form())?,
        r3::sharp(scenario.system.potential())?,
    ))
}

/// Electrostatic reduction checks; `demanded` controls whether a
/// non-matching scenario is an error or silently out of scope (`all`).
pub fn reduce_p0_checks(scenario: &Scenario, demanded: bool) -> Vec<CheckRecord> {
    let tols = &scenario.tolerances;
    let rule = scenario.rule();
    let (d, alpha) = match p0_proxies(scenario) {
        Ok(v) => v,
        Err(e) => {
            return if demanded {
                vec![CheckRecord::failed("reduce_p0.applicability", &e)]
            } else {
                Vec::new()
            };
        }
    };
    let w = scenario.velocity();
    let region = &scenario.region;
    let mut checks = Vec::new();

    let run = || -> Result<Vec<CheckRecord>> {
        let minus =
            electrostatic_force_terms(&d, &alpha, w, region, &rule, ElectricConvention::MinusGradAlpha)?;
        let plus =
            electrostatic_force_terms(&d, &alpha, w, region, &rule, ElectricConvention::GradAlpha)?;
        let general = force_cartan(&scenario.system, region, w, &rule)?;
        let mut out = Vec::new();
        out.push(
            CheckRecord::new(
                "reduce_p0.boundary_identity",
                tols.route_rel * minus.scale(),
            )
            .route("interior_sum", minus.interior_sum())
            .route("boundary_form", minus.boundary)
            .residual("sum_vs_boundary", (minus.interior_sum() - minus.boundary).abs())
            .terms(minus.as_map())
            .judge(),
        );
        out.push(
            CheckRecord::new(
                "reduce_p0.term_sum_vs_general",
                tols.reduction_rel * tol::scale_of(&[general]),
            )
            .route("grad_convention_sum", plus.interior_sum())
            .route("general_cartan", general)
            .route("minus_grad_convention_sum", minus.interior_sum())
            .residual("plus_sum_vs_general", (plus.interior_sum() - general).abs())
            .residual("minus_sum_vs_negated_general", (minus.interior_sum() + general).abs())
            .judge(),
        );
        let t = scenario.fd_step;
        let oracle = crate::reduction::transported_energy_p0(&d, &alpha, region, &scenario.motion, t, &rule)?;
        let pform = energy_under_motion(&scenario.system, region, &scenario.motion, t, &rule)?;
        out.push(
            CheckRecord::new(
                "reduce_p0.transport_oracle",
                tols.reduction_rel * tol::scale_of(&[oracle, pform]),
            )
            .route("vector_calculus", oracle)
            .route("pform", pform)
            .residual("difference", (oracle - pform).abs())
            .judge(),
        );
        Ok(out)
    };
    match run() {
        Ok(mut v) => checks.append(&mut v),
        Err(e) => checks.push(CheckRecord::failed("reduce_p0.routes", &e)),
    }
    checks
}

/// Magnetostatic reduction checks.
pub fn reduce_p1_checks(scenario: &Scenario, demanded: bool) -> Vec<CheckRecord> {
    let tols = &scenario.tolerances;
    let rule = scenario.rule();
    let (h, a) = match p1_proxies(scenario) {
        Ok(v) => v,
        Err(e) => {
            return if demanded {
                vec![CheckRecord::failed("reduce_p1.applicability", &e)]
            } else {
                Vec::new()
            };
        }
    };
    let w = scenario.velocity();
    let region = &scenario.region;
    let mut checks = Vec::new();

    let run = || -> Result<Vec<CheckRecord>> {
        let mut out = Vec::new();
        let terms = magnetostatic_force_terms(&h, &a, w, region, &rule)?;
        let general = force_cartan(&scenario.system, region, w, &rule)?;
        out.push(
            CheckRecord::new(
                "reduce_p1.term_sum_vs_general",
                tols.reduction_rel * tol::scale_of(&[general, terms.total()]),
            )
            .route("term_sum", terms.total())
            .route("general_cartan", general)
            .residual("difference", (terms.total() - general).abs())
            .terms(terms.as_map())
            .judge(),
        );

        let points = sample_points(3, tol::SAMPLE_COUNT);
        let pw = magnetostatic_pointwise_residual(&h, &a, w, &points)?;
        let integrand_scale = 1.0
            + r3::flat(&h)?
                .wedge(&lie_derivative(w, &r3::flat(&a)?)?)?
                .d()
                .max_abs_coeff();
        out.push(
            CheckRecord::new(
                "reduce_p1.pointwise_integrand",
                tols.pointwise_rel * integrand_scale,
            )
            .residual("max_abs", pw)
            .judge(),
        );

        let t = scenario.fd_step;
        let oracle_rule = QuadratureRule::new(scenario.quad_order.max(12))?;
        let oracle = transported_energy_p1(&h, &a, region, &scenario.motion, t, &oracle_rule)?;
        let pform = energy_under_motion(&scenario.system, region, &scenario.motion, t, &oracle_rule)?;
        out.push(
            CheckRecord::new(
                "reduce_p1.transport_oracle",
                tols.reduction_rel * tol::scale_of(&[oracle, pform]),
            )
            .route("vector_calculus", oracle)
            .route("pform", pform)
            .residual("difference", (oracle - pform).abs())
            .judge(),
        );

        // half-Lorentz golden shape: uniform B and J, α♯ = ½B×x, constant w
        let b = r3::curl(&a)?;
        let j = r3::curl(&h)?;
        let uniform = |v: &VectorField| (1..=3).all(|i| v.component(i).total_degree() == 0);
        if uniform(&b) && uniform(&j) && uniform(w) {
            let pos = VectorField::new(vec![
                Polynomial::var(3, 1),
                Polynomial::var(3, 2),
                Polynomial::var(3, 3),
            ])?;
            let rotation = r3::cross(&b, &pos)?.scaled(0.5);
            if vec_residual(&a, &rotation) <= tols.coeff_rel {
                let jxb_w = r3::dot(&r3::cross(&j, &b)?, w)?.eval(&[0.0; 3])?;
                let vol = integrate_scalar(&Polynomial::constant(3, 1.0), region, &rule)?;
                let expect = -0.5 * jxb_w * vol;
                out.push(
                    CheckRecord::new(
                        "reduce_p1.half_lorentz",
                        tols.golden_abs * tol::scale_of(&[expect]),
                    )
                    .route("grad_alpha", terms.grad_alpha)
                    .route("expected", expect)
                    .residual("difference", (terms.grad_alpha - expect).abs())
                    .judge(),
                );
            }
        }
        Ok(out)
    };
    match run() {
        Ok(mut v) => checks.append(&mut v),
        Err(e) => checks.push(CheckRecord::failed("reduce_p1.routes", &e)),
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_suite_passes_on_seed_42() {
        for check in identity_suite(42, &Tolerances::default()) {
            assert!(check.pass, "{check:?}");
        }
    }

    #[test]
    fn golden_suite_passes() {
        for check in golden_checks(&Tolerances::default()) {
            assert!(check.pass, "{check:?}");
        }
    }

    #[test]
    fn scenario_commands_pass_on_fixture() {
        let text = r#"{
            "n": 3, "p": 1,
            "h_proxy": [[], [], [{"coeff": 1.0, "exp": [0,0,0]}]],
            "alpha_proxy": [[], [{"coeff": 1.0, "exp": [1,0,0]}], []],
            "velocity": [[{"coeff": 1.0, "exp": [1,0,0]}], [], []],
            "region": {"boxes": [{"min": [0,0,0], "max": [1,1,1]}]},
            "seed": 7
        }"#;
        let scenario = Scenario::from_json(text).unwrap();
        let report = run(Command::All, &scenario);
        assert!(report.pass, "{}", report.render_text());
        // the magnetostatic hand case: pressure term −1 and total −1
        let term_check = report
            .checks
            .iter()
            .find(|c| c.name == "reduce_p1.term_sum_vs_general")
            .unwrap();
        let terms = term_check.terms.as_ref().unwrap();
        assert!((terms["pressure"] + 1.0).abs() < 1e-12);
        assert!((term_check.routes["term_sum"] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_command_rejects_wrong_degree() {
        let text = r#"{
            "n": 3, "p": 1,
            "h_proxy": [[], [], [{"coeff": 1.0, "exp": [0,0,0]}]],
            "alpha_proxy": [[], [{"coeff": 1.0, "exp": [1,0,0]}], []],
            "velocity": [[{"coeff": 1.0, "exp": [1,0,0]}], [], []],
            "region": {"boxes": [{"min": [0,0,0], "max": [1,1,1]}]}
        }"#;
        let scenario = Scenario::from_json(text).unwrap();
        let report = run(Command::ReduceP0, &scenario);
        assert!(!report.pass);
        assert!(report.checks.iter().any(|c| c.error.is_some()));
    }

    #[test]
    fn reports_are_deterministic() {
        let text = r#"{
            "n": 3, "p": 0,
            "d_proxy": [[{"coeff": 1.0, "exp": [0,0,0]}], [], []],
            "alpha_scalar": [{"coeff": 0.5, "exp": [2,0,0]}],
            "velocity": [[{"coeff": 1.0, "exp": [0,0,0]}], [], []],
            "region": {"boxes": [{"min": [0,0,0], "max": [1,1,1]}]},
            "seed": 9
        }"#;
        let scenario = Scenario::from_json(text).unwrap();
        let a = run(Command::Force, &scenario).to_json();
        let b = run(Command::Force, &scenario).to_json();
        assert_eq!(a, b);
    }
}
