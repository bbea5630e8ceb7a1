//! The property suite behind `coherent-clock verify`: every module invariant,
//! evaluated at the configured spin, grid and seed, with measured deviations.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::CliError;
use crate::classical::ClassicalConfig;
use crate::clock::{
    amplitude_correlation, clock_operator, clock_symbol_q1, default_amplitude_sweep, default_phase_sweep,
    deparameterize, phase_correlation, symmetric_sweep, CorrelationTrace,
};
use crate::coherent::{
    overlap, project_coherent, resolution_of_unity, sample_xi, su2_coherent, CoherentLabel, ReducedLabel,
};
use crate::fit::fit_sinusoid;
use crate::fock::{
    apply_full_ladder, casimir, default_cutoff, spin_operators, Ladder, PhysOperator, PhysicalState, Spin,
    TwoModeSpace,
};
use crate::quadrature::{GaugeGrid, RadialGrid, SphereGrid};
use crate::special::integer_phase;
use crate::symbols::{
    project_lower_symbol, radial_grid_for, reconstruct_operator, s3_lower_symbol, s3_upper_shape,
    spin_symbols_closed_form, spin_symbols_from_matrices, FullLowerSymbol, ReducedLowerSymbol,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Below,
    Above,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::Above => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub measured: f64,
    pub relation: Relation,
    pub bound: f64,
    pub pass: bool,
}

fn below(module: &'static str, name: &'static str, measured: f64, bound: f64) -> Check {
    Check {
        module,
        name,
        measured,
        relation: Relation::Below,
        bound,
        pass: measured < bound,
    }
}

fn above(module: &'static str, name: &'static str, measured: f64, bound: f64) -> Check {
    Check {
        module,
        name,
        measured,
        relation: Relation::Above,
        bound,
        pass: measured > bound,
    }
}

/// Largest value, with NaN winning so that it cannot hide a failure.
fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |acc: f64, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

/// As [`worst`] but without the floor at zero.
fn largest(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(f64::NEG_INFINITY, |acc, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

fn random_two_mode_label(rng: &mut ChaCha8Rng) -> CoherentLabel {
    let mut c = || Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    let alpha = c();
    let mut beta = c();
    if beta.norm() < 1e-3 {
        beta += 0.5;
    }
    CoherentLabel::new(alpha, beta)
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    spin: Spin,
    grid: SphereGrid,
}

impl Ctx<'_> {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        rng_for(self.cfg.seed, salt)
    }

    fn xis(&self, salt: u64, count: usize) -> Vec<Complex64> {
        let mut rng = self.rng(salt);
        (0..count).map(|_| sample_xi(&mut rng)).collect()
    }
}

pub fn run_checks(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let ctx = Ctx {
        cfg,
        spin: cfg.spin(),
        grid: cfg.sphere_grid()?,
    };
    let mut checks = Vec::new();
    classical_checks(&ctx, &mut checks);
    fock_checks(&ctx, &mut checks)?;
    coherent_checks(&ctx, &mut checks)?;
    symbol_checks(&ctx, &mut checks)?;
    clock_checks(&ctx, &mut checks)?;
    Ok(checks)
}

fn on_shell_samples(ctx: &Ctx, salt: u64) -> Vec<ClassicalConfig> {
    let mut rng = ctx.rng(salt);
    (0..ctx.cfg.samples)
        .map(|_| {
            let xi = sample_xi(&mut rng);
            let phi_prime = rng.gen_range(0.0..TAU);
            ClassicalConfig::on_shell_from_label(xi, ctx.spin.m_prime(), phi_prime, ctx.cfg.units)
        })
        .collect()
}

fn classical_checks(ctx: &Ctx, out: &mut Vec<Check>) {
    const M: &str = "classical_dynamics";
    let omega = ctx.cfg.units.omega;
    let configs = on_shell_samples(ctx, 1);

    let energy = worst(configs.par_iter().map(|c| {
        let e0 = c.oscillator_energy(&c.trajectory(0.0));
        let span = 10.0 * TAU / omega;
        worst((0..=200).map(|k| {
            let e = c.oscillator_energy(&c.trajectory(span * f64::from(k) / 200.0));
            ((e - e0) / e0).abs()
        }))
    }).collect::<Vec<_>>());
    out.push(below(M, "energy_conservation", energy, 1e-13));

    let mut rng = ctx.rng(2);
    let shifts: Vec<f64> = (0..configs.len())
        .map(|_| rng.gen_range(-5.0..5.0) * omega * rng.gen_range(-5.0..5.0))
        .collect();
    let gauge = worst(configs.iter().zip(&shifts).map(|(c, &delta)| {
        match (c.reduced_coordinate(), c.gauge_shift(delta).reduced_coordinate()) {
            (Ok(a), Ok(b)) => (a - b).norm() / a.norm().max(1.0),
            _ => f64::NAN,
        }
    }));
    out.push(below(M, "gauge_invariance_xi", gauge, 1e-13));

    // interior of the principal half-period, where cos⁻¹ is well conditioned
    let branch = worst(configs.par_iter().map(|c| {
        worst((0..50).map(|k| {
            let s = 0.05 + (PI - 0.1) * f64::from(k) / 49.0;
            let tau = (s - c.phi_prime) / c.omega;
            let p = c.trajectory(tau);
            c.clock_readout(p.q2).map_or(f64::NAN, |q1| (q1 - p.q1).abs())
        }))
    }).collect::<Vec<_>>());
    out.push(below(M, "branch_consistency", branch, 1e-12));
}

fn fock_checks(ctx: &Ctx, out: &mut Vec<Check>) -> Result<(), CliError> {
    const M: &str = "fock_space";
    let m = ctx.spin.m_prime();
    let s = spin_operators(m);
    let i = Complex64::i();
    let [s1, s2, s3] = s.as_array();
    let algebra = worst([
        s1.commutator(s2)?.max_abs_diff(&s3.scale(i)),
        s2.commutator(s3)?.max_abs_diff(&s1.scale(i)),
        s3.commutator(s1)?.max_abs_diff(&s2.scale(i)),
    ]);
    out.push(below(M, "su2_algebra", algebra, 1e-13));

    let j = ctx.spin.j();
    let cas = casimir(m).max_abs_diff(&PhysOperator::identity(m).scale(Complex64::from(j * (j + 1.0))));
    out.push(below(M, "casimir", cas, 1e-12));

    let spectrum = worst(s.as_array().iter().map(|op| {
        let eig = op.hermitian_eigenvalues();
        worst(eig.iter().enumerate().map(|(k, &e)| (e - (k as f64 - j)).abs()))
    }));
    out.push(below(M, "spectrum", spectrum, 1e-10));

    // S₊ = a†b and S₋ = b†a, built from single-mode ladder steps, stay in the
    // sector and agree with the sector matrices column by column.
    let s_plus = s1.add(&s2.scale(i))?;
    let s_minus = s1.sub(&s2.scale(i))?;
    let commute = worst((0..=m as usize).map(|n| {
        let ket = PhysicalState::basis_vector(m, n);
        let via = |first, second| {
            apply_full_ladder(&ket, first)
                .and_then(|v| apply_full_ladder(&v, second))
                .unwrap_or_else(|| PhysicalState::basis_vector(m, 0).scale(Complex64::from(0.0)))
        };
        let up = via(Ladder::B, Ladder::ADag);
        let down = via(Ladder::A, Ladder::BDag);
        if up.m_prime() != m || down.m_prime() != m {
            return f64::INFINITY;
        }
        let (Ok(a), Ok(b)) = (s_plus.apply(&ket), s_minus.apply(&ket)) else {
            return f64::NAN;
        };
        up.max_abs_diff(&a).max(down.max_abs_diff(&b))
    }));
    out.push(below(M, "constraint_commutation", commute, 1e-12));
    Ok(())
}

fn coherent_checks(ctx: &Ctx, out: &mut Vec<Check>) -> Result<(), CliError> {
    const M: &str = "coherent_projection";
    let m = ctx.spin.m_prime();
    let mut rng = ctx.rng(10);
    let labels: Vec<CoherentLabel> = (0..ctx.cfg.samples).map(|_| random_two_mode_label(&mut rng)).collect();

    let space = TwoModeSpace::new(default_cutoff(m));
    let idem = worst(labels.iter().take(3).map(|l| {
        let once = space.select_sector(&space.coherent(l.alpha, l.beta), m);
        let twice = space.select_sector(&once, m);
        (once - twice).camax()
    }));
    out.push(below(M, "projection_idempotence", idem, f64::MIN_POSITIVE));

    let mut rng = ctx.rng(11);
    let angles: Vec<f64> = (0..labels.len()).map(|_| rng.gen_range(0.0..TAU)).collect();
    let covariance = worst(labels.par_iter().zip(&angles).map(|(l, &t0)| {
        let base = project_coherent(l, m).state;
        let scale = base.amplitudes().camax();
        let rotated = project_coherent(&l.gauge_rotate(t0), m).state;
        let expected = base.scale(Complex64::from_polar(1.0, integer_phase(&[(m, t0)])));
        rotated.max_abs_diff(&expected) / scale
    }).collect::<Vec<_>>());
    out.push(below(M, "gauge_covariance", covariance, 1e-13));

    let factoring = worst(labels.par_iter().map(|l| {
        let Ok(chart) = l.chart() else { return f64::NAN };
        let expected = su2_coherent(&ReducedLabel::new(chart.xi, ctx.spin))
            .scale(Complex64::from_polar(1.0, integer_phase(&[(m, chart.theta)])));
        project_coherent(l, m).normalized().map_or(f64::NAN, |v| v.max_abs_diff(&expected))
    }).collect::<Vec<_>>());
    out.push(below(M, "projection_matches_su2", factoring, 1e-12));

    let a = ctx.xis(12, ctx.cfg.samples);
    let b = ctx.xis(13, ctx.cfg.samples);
    let pairs: Vec<(ReducedLabel, ReducedLabel)> = a
        .iter()
        .zip(&b)
        .map(|(&x, &y)| (ReducedLabel::new(x, ctx.spin), ReducedLabel::new(y, ctx.spin)))
        .collect();
    let bound = worst(pairs.iter().map(|(x, y)| {
        let cross = overlap(x, y).map_or(f64::NAN, |o| (o.norm() - 1.0).max(0.0));
        let own = overlap(x, x).map_or(f64::NAN, |o| (o - 1.0).norm());
        cross.max(own)
    }));
    out.push(below(M, "overlap_bound", bound, 1e-12));

    let explicit = worst(pairs.par_iter().map(|(x, y)| {
        let closed = overlap(x, y).unwrap_or(Complex64::new(f64::NAN, 0.0));
        su2_coherent(x).inner(&su2_coherent(y)).map_or(f64::NAN, |v| (v - closed).norm())
    }).collect::<Vec<_>>());
    out.push(below(M, "overlap_closed_vs_explicit", explicit, 1e-12));

    let rou = resolution_of_unity(ctx.spin, &ctx.grid).max_abs_diff(&PhysOperator::identity(m));
    out.push(below(M, "resolution_of_unity", rou, 1e-10));
    Ok(())
}

fn symbol_checks(ctx: &Ctx, out: &mut Vec<Check>) -> Result<(), CliError> {
    const M: &str = "symbol_calculus";
    let m = ctx.spin.m_prime();
    let j = ctx.spin.j();
    let xis = ctx.xis(20, ctx.cfg.samples);
    let labels: Vec<ReducedLabel> = xis.iter().map(|&x| ReducedLabel::new(x, ctx.spin)).collect();

    let pairs: Vec<_> = labels
        .par_iter()
        .map(|l| (spin_symbols_closed_form(l), spin_symbols_from_matrices(l)))
        .collect();
    let s13 = worst(pairs.iter().map(|(c, x)| (c.s1 - x.s1).abs().max((c.s3 - x.s3).abs())));
    // symbols are O(j); the explicit sum carries rounding that grows with it
    let symbol_bound = 1e-12 * j.max(1.0);
    out.push(below(M, "spin_symbols_s1_s3", s13, symbol_bound));
    // the Schwinger S₂ has the opposite orientation to the quoted closed form
    let s2 = worst(pairs.iter().map(|(c, x)| (c.s2 + x.s2).abs()));
    out.push(below(M, "spin_symbols_s2_mirrored", s2, symbol_bound));
    let sphere = worst(pairs.iter().map(|(c, _)| (c.norm_sqr() - j * j).abs()));
    out.push(below(M, "sphere_identity", sphere, 1e-10));

    let gauge = GaugeGrid::default();
    let radial = RadialGrid::with_default_order(m);
    let one = project_lower_symbol(&FullLowerSymbol::constant(1.0), &radial, &gauge);
    let transport = worst(xis.iter().map(|&x| (one.eval(x) - 1.0).abs()));
    out.push(below(M, "projected_constant", transport, 1e-14));
    let identity = reconstruct_operator(&ReducedLowerSymbol::constant(1.0), ctx.spin, &ctx.grid)
        .max_abs_diff(&PhysOperator::identity(m));
    out.push(below(M, "reconstructed_identity", identity, 1e-10));

    let q2 = project_lower_symbol(&FullLowerSymbol::q2_position(), &radial, &gauge);
    let shifted = FullLowerSymbol::new(|xi, r, theta| r.sqrt() * xi.re / (1.0 + xi.norm_sqr()) * (theta + 0.7).cos());
    let shifted = project_lower_symbol(&shifted, &radial, &gauge);
    let null = worst(xis.iter().map(|&x| q2.eval(x).abs().max(shifted.eval(x).abs())));
    out.push(below(M, "gauge_average_null", null, 1e-14));

    let peaking = worst([m, 10, 100, 1000].into_iter().map(|mm| {
        let sym = FullLowerSymbol::radius();
        let projected = project_lower_symbol(&sym, &radial_grid_for(&sym, mm), &gauge);
        let target = f64::from(mm) + 1.0;
        let measured = (projected.eval(Complex64::new(0.3, 0.4)) - target).abs() / target;
        (measured - 1.0 / target).abs()
    }));
    out.push(below(M, "constraint_peaking", peaking, 1e-12));

    let real = ReducedLowerSymbol::new(|xi| (xi.re - 0.3 * xi.im + xi.norm_sqr()) / (1.0 + xi.norm_sqr()));
    let herm = reconstruct_operator(&real, ctx.spin, &ctx.grid).hermiticity_defect();
    out.push(below(M, "reconstruction_hermitian", herm, 1e-13));

    let s3 = spin_operators(m).s3;
    let lower = reconstruct_operator(&s3_lower_symbol(ctx.spin), ctx.spin, &ctx.grid).max_abs_diff(&s3);
    out.push(below(M, "s3_lower_symbol", lower, 1e-10));
    // the upper-symbol shape reconstructs j/(j+1)·S₃, which misses S₃ by a
    // visible 1/(j+1); it converges to S₃ only as j grows
    let upper = reconstruct_operator(&s3_upper_shape(ctx.spin), ctx.spin, &ctx.grid);
    let shrunk = s3.scale(Complex64::from(j / (j + 1.0)));
    out.push(below(M, "s3_upper_shape_reconstructs_shrunk_s3", upper.max_abs_diff(&shrunk), 1e-10));
    if ctx.spin.two_j() > 0 && j < 9.0 {
        let rel = upper.sub(&s3)?.frobenius_norm() / s3.frobenius_norm();
        out.push(above(M, "s3_upper_shape_differs", rel, 0.1));
    }
    Ok(())
}

fn monotone_width_approach(traces: &[CorrelationTrace]) -> f64 {
    // largest step of |σ²_fit/σ²_pred − 1| between successive spins; negative when it shrinks throughout
    let devs: Vec<f64> = traces.iter().map(|t| (t.width_ratio() - 1.0).abs()).collect();
    largest(devs.windows(2).map(|w| w[1] - w[0]))
}

fn clock_checks(ctx: &Ctx, out: &mut Vec<Check>) -> Result<(), CliError> {
    const M: &str = "quantum_clock";
    let m = ctx.spin.m_prime();
    let units = ctx.cfg.units;
    let taus = ctx.cfg.default_tau_grid();
    let xis = ctx.xis(30, ctx.cfg.samples);
    let phi_prime = ctx.cfg.phi_prime;
    let phases: Vec<f64> = taus.iter().map(|t| units.omega * t + phi_prime).collect();

    let fits: Vec<_> = xis
        .par_iter()
        .map(|&xi| {
            let values: Vec<f64> = taus.iter().map(|&t| clock_symbol_q1(xi, m, t, phi_prime, units.omega)).collect();
            fit_sinusoid(&phases, &values)
        })
        .collect::<Result<_, _>>()?;
    out.push(below(M, "sinusoidality", worst(fits.iter().map(|f| f.max_residual)), 1e-12));
    let phase = worst(fits.iter().zip(&xis).map(|(f, xi)| wrap_angle(f.phase_offset - xi.arg()).abs()));
    out.push(below(M, "clock_phase", phase, 1e-12));

    let sym = FullLowerSymbol::q1_position();
    let radial = RadialGrid::with_default_order(m);
    let mut rng = ctx.rng(31);
    let ratios: Vec<f64> = xis
        .iter()
        .filter_map(|&xi| {
            let tau = rng.gen_range(0.0..TAU) / units.omega;
            let closed = clock_symbol_q1(xi, m, tau, phi_prime, units.omega);
            let scale = crate::clock::clock_amplitude(xi, m);
            (closed.abs() > 1e-3 * scale)
                .then(|| deparameterize(&sym, xi, &radial, tau, phi_prime, units.omega) / closed)
        })
        .collect();
    let consistency = match ratios.first() {
        Some(&r0) => worst(ratios.iter().map(|r| (r / r0 - 1.0).abs())),
        None => f64::NAN,
    };
    out.push(below(M, "deparameterize_consistency", consistency, 1e-10));

    let mut rng = ctx.rng(32);
    let ops: Vec<PhysOperator> = (0..3)
        .map(|_| clock_operator(ctx.spin, rng.gen_range(0.0..TAU), phi_prime, units.omega, &ctx.grid))
        .collect();
    out.push(below(M, "clock_operator_hermitian", worst(ops.iter().map(|o| o.hermiticity_defect())), 1e-13));
    out.push(below(M, "clock_operator_traceless", worst(ops.iter().map(|o| o.trace().norm())), 1e-12));

    let spins = [10u32, 20, 40, 100, 200].map(Spin::from_two_j);
    let amplitude: Vec<CorrelationTrace> = spins
        .iter()
        .map(|&s| amplitude_correlation(std::f64::consts::FRAC_PI_4, s, &default_amplitude_sweep(std::f64::consts::FRAC_PI_4, s)))
        .collect::<Result<_, _>>()?;
    out.push(below(M, "width_scaling_amplitude", monotone_width_approach(&amplitude), 0.0));
    let mut phase_trend = Vec::new();
    for xi_mag in [0.5, 1.0, 2.0] {
        let traces: Vec<CorrelationTrace> = spins
            .iter()
            .map(|&s| phase_correlation(xi_mag, s, &default_phase_sweep(xi_mag, s)))
            .collect::<Result<_, _>>()?;
        phase_trend.push(monotone_width_approach(&traces));
    }
    out.push(below(M, "width_scaling_phase", largest(phase_trend), 0.0));

    if ctx.spin.two_j() > 0 {
        let theta = 0.6;
        let sigma = (1.0 / f64::from(ctx.spin.two_j())).sqrt();
        let mut misses = 0.0;
        for count in [201usize, 401] {
            let sweep = symmetric_sweep(theta, (4.0 * sigma).min(1.5), count);
            if amplitude_correlation(theta, ctx.spin, &sweep)?.argmax() != count / 2 {
                misses += 1.0;
            }
            let sweep = symmetric_sweep(0.0, PI.min(4.0 * sigma), count);
            if phase_correlation(1.0, ctx.spin, &sweep)?.argmax() != count / 2 {
                misses += 1.0;
            }
        }
        out.push(below(M, "peak_location", misses, 0.5));
    }
    Ok(())
}
