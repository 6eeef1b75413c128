//! Acceptance criteria AC1-AC10 for the library (AC11 lives in the CLI
//! crate). Runs as a plain binary so every criterion prints one line.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use posmap::analysis::{self, ExampleMapSpec};
use posmap::linalg;
use posmap::maprep::{self, MapRep};
use posmap::matspace::{self, seeded_rng, DensityMatrix, OrthonormalBasis, Tolerance};
use posmap::stateclasses::{self, ProjectionSpec};
use posmap::{BasisKind, ComplexMatrix};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn tol() -> Tolerance {
    Tolerance::default()
}

/// AC1: every eigenvalue of a random CP unital map lies in the unit disk.
fn ac1_pf_corollary() -> Outcome {
    let mut rng = seeded_rng(0xAC1);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let d = 2 + k % 3;
        let n_ops = rng.random_range(1..=3);
        let phi = maprep::random_unital_cp_map(&mut rng, d, n_ops).unwrap();
        let r = analysis::spectrum(&phi, tol()).unwrap();
        worst = worst.max(r.spectral_radius);
    }
    outcome(
        worst <= 1.0 + 1e-9,
        format!("1000 maps, max |λ| = {worst:.15}"),
    )
}

/// AC2: spectral radius bounded by ‖φ(I)‖∞ for CP, non-unital maps.
fn ac2_pf_theorem() -> Outcome {
    let mut rng = seeded_rng(0xAC2);
    let mut violations = 0;
    let mut worst_gap = f64::NEG_INFINITY;
    let mut non_unital = 0;
    for k in 0..500 {
        let d = 2 + k % 3;
        let n_ops = rng.random_range(1..=4);
        let phi = maprep::random_cp_map(&mut rng, d, n_ops);
        if !maprep::is_unital(&phi, tol()) {
            non_unital += 1;
        }
        let r = analysis::spectrum(&phi, tol()).unwrap();
        let gap = r.spectral_radius - r.pf_bound;
        worst_gap = worst_gap.max(gap);
        if r.spectral_radius > r.pf_bound + 1e-9 {
            violations += 1;
        }
    }
    outcome(
        violations == 0 && non_unital == 500,
        format!("500 maps ({non_unital} non-unital), violations = {violations}, max(ρ − bound) = {worst_gap:.3e}"),
    )
}

/// AC3: eigensolver spectrum of the example map equals the closed form.
fn ac3_example_map() -> Outcome {
    let mut rng = seeded_rng(0xAC3);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let d = 2 + k % 4;
        let spec = ExampleMapSpec::random(&mut rng, d);
        let spec = ExampleMapSpec::new(spec.alpha, spec.beta, tol()).unwrap();
        let phi = analysis::example_map(&spec).unwrap();
        let computed = analysis::spectrum(&phi, tol()).unwrap().eigenvalues;
        let predicted = analysis::predicted_eigenvalues(&spec);
        let (_, dev) = analysis::match_multisets(&computed, &predicted).unwrap();
        worst = worst.max(dev);
    }
    outcome(
        worst <= 1e-10,
        format!("100 specs d=2..5, max deviation = {worst:.3e}"),
    )
}

fn random_map_of_some_kind<R: Rng>(rng: &mut R, d: usize, k: usize) -> MapRep {
    match k % 3 {
        0 => maprep::random_linear_map(rng, d),
        1 => maprep::random_cp_map(rng, d, 1 + k % 4),
        _ => maprep::random_unital_cp_map(rng, d, 2).unwrap(),
    }
}

/// AC4: `(φ, ψ) = <Ĉ_φ, Ĉ_ψ>`.
fn ac4_isometry() -> Outcome {
    let mut rng = seeded_rng(0xAC4);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let d = 2 + k % 3;
        let phi = random_map_of_some_kind(&mut rng, d, k);
        let psi = random_map_of_some_kind(&mut rng, d, k + 1);
        let lhs = maprep::map_inner(&phi, &psi).unwrap();
        let rhs = maprep::choi_inner(&phi, &psi).unwrap();
        worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    outcome(
        worst <= 1e-10,
        format!("200 pairs, max relative gap = {worst:.3e}"),
    )
}

/// Choi matrix assembled from `φ(e_kl)` blocks, independent of reshuffle.
fn choi_oracle(phi: &MapRep) -> ComplexMatrix {
    let d = phi.dim();
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for k in 0..d {
        for l in 0..d {
            let e = matspace::matrix_unit(d, k, l);
            out += &e.kron(&phi.apply(&e).unwrap());
        }
    }
    out
}

/// AC5: representation round trips, kernel A<->B, reshuffle oracle.
fn ac5_roundtrips() -> Outcome {
    let mut rng = seeded_rng(0xAC5);
    let mut worst: f64 = 0.0;
    let mut what = "";
    let mut track = |err: f64, name: &'static str, worst: &mut f64| {
        if err > *worst {
            *worst = err;
            what = name;
        }
    };
    for k in 0..200 {
        let d = 2 + k % 3;
        let phi = random_map_of_some_kind(&mut rng, d, k);
        let t = phi.to_transfer();
        let b = t.matrix().clone();

        let choi = maprep::reshuffle(&t).unwrap();
        track(
            choi.matrix().max_abs_diff(&choi_oracle(&phi)),
            "reshuffle vs oracle",
            &mut worst,
        );
        track(
            maprep::unreshuffle(&choi).matrix().max_abs_diff(&b),
            "choi -> transfer",
            &mut worst,
        );

        let basis = OrthonormalBasis::named(
            [
                BasisKind::MatrixUnits,
                BasisKind::GellMannWithIdentity,
                BasisKind::FourierDiagonalPlusOffdiag,
            ][k % 3],
            d,
        )
        .unwrap();
        let af = phi.to_aform(&basis).unwrap();
        track(
            af.to_transfer().matrix().max_abs_diff(&b),
            "aform -> transfer",
            &mut worst,
        );
        let tf = t.in_basis(&basis).unwrap();
        track(
            tf.to_matrix_units().matrix().max_abs_diff(&b),
            "basis change",
            &mut worst,
        );
        let a_kernel = maprep::aform_from_bform(&tf).unwrap();
        track(
            a_kernel.matrix().max_abs_diff(af.matrix()),
            "kernel A vs permutation A",
            &mut worst,
        );
        let b_back = maprep::bform_from_aform(&a_kernel).unwrap();
        track(
            b_back.matrix().max_abs_diff(tf.matrix()),
            "A -> B -> A",
            &mut worst,
        );

        let a = matspace::gaussian_matrix(&mut rng, d, d);
        let reference = phi.apply(&a).unwrap();
        for rep in [
            MapRep::Transfer(t.clone()),
            MapRep::Transfer(tf.clone()),
            MapRep::Choi(choi.clone()),
            MapRep::AForm(af.clone()),
        ] {
            track(
                rep.apply(&a).unwrap().max_abs_diff(&reference),
                "apply across reprs",
                &mut worst,
            );
        }
        if analysis::is_completely_positive(&phi, tol()).unwrap().cp {
            let kraus = MapRep::Kraus(analysis::kraus_from_choi(&phi, tol()).unwrap());
            track(
                kraus.to_transfer().matrix().max_abs_diff(&b),
                "kraus -> transfer",
                &mut worst,
            );
        }
    }
    outcome(
        worst <= 1e-10,
        format!("200 maps, max entrywise error = {worst:.3e} ({what})"),
    )
}

fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = matspace::gaussian_matrix(rng, d, d);
    let h = (&g + &g.adjoint()).scale_real(0.5);
    linalg::hermitian_eigen(&h).unwrap().1
}

/// Random `π(p, ω)`: projectors from a random unitary split into blocks,
/// `ω_α` a random state supported on block `α`.
fn random_projection_spec<R: Rng>(rng: &mut R, d: usize, blocks: &[usize]) -> ProjectionSpec {
    assert_eq!(blocks.iter().sum::<usize>(), d);
    let u = random_unitary(rng, d);
    let mut p = Vec::new();
    let mut omega = Vec::new();
    let mut start = 0;
    for &k in blocks {
        let v = ComplexMatrix::from_fn(d, k, |i, j| u[(i, start + j)]);
        p.push(&v * &v.adjoint());
        let rank = rng.random_range(1..=k);
        let small = matspace::random_density_with(rng, k, rank).unwrap();
        let w = &(&v * small.matrix()) * &v.adjoint();
        omega.push(DensityMatrix::new(w.hermitian_part(), tol()).unwrap());
        start += k;
    }
    ProjectionSpec::new(p, omega, tol()).unwrap()
}

/// AC6: CP certification and Kraus reconstruction.
fn ac6_cp_certification() -> Outcome {
    let t = tol();
    let mut notes = Vec::new();
    let mut pass = true;
    for d in 2..=5 {
        let r = analysis::is_completely_positive(&maprep::transpose_map(d), t).unwrap();
        if r.cp || (r.min_choi_eig + 1.0).abs() > 1e-10 {
            pass = false;
            notes.push(format!("transpose d={d}: {r:?}"));
        }
    }
    let mut rng = seeded_rng(0xAC6);
    let mut accepted: Vec<(String, MapRep)> = Vec::new();
    for d in 2..=4 {
        accepted.push((format!("identity d={d}"), maprep::identity_map(d)));
        let units: Vec<_> = (0..d).map(|i| matspace::matrix_unit(d, i, i)).collect();
        accepted.push((
            format!("pinching rank-1 d={d}"),
            stateclasses::pinching(&units, t).unwrap(),
        ));
        let spec = random_projection_spec(&mut rng, d, &[1, d - 1]);
        let coarse = spec.projectors().to_vec();
        accepted.push((
            format!("pinching coarse d={d}"),
            stateclasses::pinching(&coarse, t).unwrap(),
        ));
        accepted.push((
            format!("pi(p,omega) d={d}"),
            stateclasses::projection_map(&spec),
        ));
    }
    for d in 3..=5 {
        accepted.push((format!("ball d={d}"), stateclasses::ball_map(d).unwrap()));
    }
    for k in 0..20 {
        accepted.push((
            format!("random CP #{k}"),
            maprep::random_cp_map(&mut rng, 2 + k % 3, 1 + k % 4),
        ));
    }
    let mut worst_rec: f64 = 0.0;
    for (name, phi) in &accepted {
        let r = analysis::is_completely_positive(phi, t).unwrap();
        if !r.cp {
            pass = false;
            notes.push(format!("{name} rejected ({:.3e})", r.min_choi_eig));
            continue;
        }
        let kraus = MapRep::Kraus(analysis::kraus_from_choi(phi, t).unwrap());
        worst_rec = worst_rec.max(kraus.max_abs_diff(phi));
    }
    pass &= worst_rec <= 1e-10;
    outcome(
        pass,
        format!(
            "transpose d=2..5 rejected at -1; {} CP maps accepted; Kraus reconstruction {worst_rec:.3e} {}",
            accepted.len(),
            notes.join("; ")
        ),
    )
}

/// AC7: the ball map sends states into the purity ball, onto its boundary
/// exactly for pure inputs.
fn ac7_ball_image() -> Outcome {
    let mut rng = seeded_rng(0xAC7);
    let mut over: f64 = f64::NEG_INFINITY;
    let mut pure_dev: f64 = 0.0;
    let mut mixed_min_gap = f64::INFINITY;
    for k in 0..500 {
        let d = 3 + k % 3;
        let rank = 1 + (k / 3) % d;
        let phi = stateclasses::ball_map(d).unwrap();
        let rho = matspace::random_density_with(&mut rng, d, rank).unwrap();
        let p = matspace::matrix_purity(&phi.apply(rho.matrix()).unwrap());
        let bound = stateclasses::ball_purity_bound(d);
        over = over.max(p - bound);
        if rank == 1 {
            pure_dev = pure_dev.max((p - bound).abs());
        } else {
            mixed_min_gap = mixed_min_gap.min(bound - p);
        }
    }
    outcome(
        over <= 1e-10 && pure_dev <= 1e-10 && mixed_min_gap > 1e-10,
        format!(
            "500 states d=3..5: max(purity − bound) = {over:.3e}, pure |dev| = {pure_dev:.3e}, min mixed gap = {mixed_min_gap:.3e}"
        ),
    )
}

/// AC8: ball witnesses for pure states.
fn ac8_witness() -> Outcome {
    let t = tol();
    let mut rng = seeded_rng(0xAC8);
    let closed = (0.5f64).sqrt() - 1.0;
    let mut worst_value = f64::NEG_INFINITY;
    let mut worst_closed: f64 = 0.0;
    let mut worst_sample = f64::INFINITY;
    let mut cone_ok = true;
    for k in 0..100 {
        let psi = matspace::haar_pure_vector(&mut rng, 3);
        let rho = DensityMatrix::pure(&psi).unwrap();
        let w = stateclasses::ball_witness(&rho, 1000, k, t).unwrap();
        worst_value = worst_value.max(w.value);
        worst_closed = worst_closed.max((w.value - closed).abs());
        worst_sample = worst_sample.min(w.sampled_min);
        cone_ok &= w.cone.passes() && stateclasses::cone_membership(&w.a, t).unwrap();
    }
    outcome(
        worst_value <= -1e-3 && cone_ok && worst_sample >= -1e-9 && worst_closed <= 1e-12,
        format!(
            "100 pure states d=3: max value = {worst_value:.6}, |value − (√½ − 1)| <= {worst_closed:.3e}, min sampled tr(aσ) = {worst_sample:.3e}, cone ok = {cone_ok}"
        ),
    )
}

/// AC9: projection laws, Werner/isotropic spans, Werner(|00><00|).
fn ac9_projections() -> Outcome {
    let t = tol();
    let mut rng = seeded_rng(0xAC9);
    let mut worst: f64 = 0.0;
    let mut laws_ok = true;
    let shapes: [&[usize]; 6] = [&[1, 1], &[1, 2], &[1, 1, 1], &[2, 2], &[1, 3], &[2, 1, 1]];
    for k in 0..30 {
        let blocks = shapes[k % shapes.len()];
        let d: usize = blocks.iter().sum();
        let spec = random_projection_spec(&mut rng, d, blocks);
        let pi = stateclasses::projection_map(&spec);
        worst = worst.max(maprep::compose(&pi, &pi).unwrap().max_abs_diff(&pi));
        laws_ok &= maprep::is_unital(&pi, Tolerance::new(1e-10));
        laws_ok &= analysis::is_completely_positive(&pi, t).unwrap().cp;
        let weights: Vec<f64> = {
            let raw: Vec<f64> = blocks.iter().map(|_| rng.random::<f64>() + 0.01).collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|x| x / s).collect()
        };
        let rho = stateclasses::invariant_states(&spec, &weights, t).unwrap();
        let fixed = maprep::dual(&pi).apply(rho.matrix()).unwrap();
        worst = worst.max(fixed.max_abs_diff(rho.matrix()));
    }
    let mut span_worst: f64 = 0.0;
    for n in 2..=3 {
        let id = ComplexMatrix::identity(n * n);
        let f = stateclasses::flip_operator(n);
        let (p1, _) = stateclasses::isotropic_projectors(n).unwrap();
        let werner = stateclasses::werner_map(n).unwrap();
        let iso = stateclasses::isotropic_map(n).unwrap();
        for _ in 0..20 {
            let rank = rng.random_range(1..=n * n);
            let rho = matspace::random_density_with(&mut rng, n * n, rank).unwrap();
            let w_out = werner.apply(rho.matrix()).unwrap();
            let i_out = iso.apply(rho.matrix()).unwrap();
            span_worst = span_worst
                .max(stateclasses::span_residual(&w_out, &[id.clone(), f.clone()]).unwrap());
            span_worst = span_worst
                .max(stateclasses::span_residual(&i_out, &[id.clone(), p1.clone()]).unwrap());
        }
    }
    let mut ket = vec![posmap::c(0.0, 0.0); 4];
    ket[0] = posmap::c(1.0, 0.0);
    let w00 = stateclasses::werner_map(2)
        .unwrap()
        .apply(DensityMatrix::pure(&ket).unwrap().matrix())
        .unwrap();
    let want =
        (&ComplexMatrix::identity(4) + &stateclasses::flip_operator(2)).scale_real(1.0 / 6.0);
    let w00_dev = w00.max_abs_diff(&want);
    outcome(
        laws_ok && worst <= 1e-10 && span_worst <= 1e-10 && w00_dev <= 1e-12,
        format!(
            "30 random pi(p,omega): laws ok = {laws_ok}, max law error = {worst:.3e}; span residual = {span_worst:.3e}; Werner(|00><00|) dev = {w00_dev:.3e}"
        ),
    )
}

/// AC10: the adapted pair is bi-orthonormal.
fn ac10_adapted_basis() -> Outcome {
    let mut rng = seeded_rng(0xAC10);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let d = 2 + k % 3;
        let rank = rng.random_range(1..=d);
        let omega = matspace::random_density_with(&mut rng, d, rank).unwrap();
        let (f, g) = analysis::adapted_invariant_basis(&omega).unwrap();
        let n = d * d;
        let gram = ComplexMatrix::from_fn(n, n, |a, b| (&f[a] * &g[b]).trace());
        worst = worst.max(gram.max_abs_diff(&ComplexMatrix::identity(n)));
    }
    outcome(
        worst <= 1e-10,
        format!("50 states d=2..4, max |Gram − I| = {worst:.3e}"),
    )
}

type Criterion = (
    &'static str,
    &'static str,
    Option<Duration>,
    fn() -> Outcome,
);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "AC1",
            "PF corollary: |λ| <= 1 for CP unital maps",
            Some(Duration::from_secs(30)),
            ac1_pf_corollary,
        ),
        (
            "AC2",
            "PF theorem: |λ| <= ‖φ(I)‖∞ for CP maps",
            Some(Duration::from_secs(20)),
            ac2_pf_theorem,
        ),
        (
            "AC3",
            "example map spectrum = closed form",
            Some(Duration::from_secs(10)),
            ac3_example_map,
        ),
        (
            "AC4",
            "map/Choi isometry",
            Some(Duration::from_secs(5)),
            ac4_isometry,
        ),
        (
            "AC5",
            "representation round trips and reshuffle",
            None,
            ac5_roundtrips,
        ),
        (
            "AC6",
            "CP certification and Kraus reconstruction",
            None,
            ac6_cp_certification,
        ),
        ("AC7", "ball image law", None, ac7_ball_image),
        ("AC8", "ball witnesses", None, ac8_witness),
        (
            "AC9",
            "projection laws and Werner/isotropic spans",
            None,
            ac9_projections,
        ),
        ("AC10", "adapted invariant basis", None, ac10_adapted_basis),
    ];
    let mut failures = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let pass = out.pass && in_time;
        if !pass {
            failures += 1;
        }
        let limit_note = limit
            .map(|l| format!(" limit {:.0}s", l.as_secs_f64()))
            .unwrap_or_default();
        println!(
            "{} {id:<5} {name}: {} [{:.2}s{limit_note}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    if failures == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
