use posmap::analysis::{self, ExampleMapSpec, PositivityVerdict};
use posmap::maprep::{self, MapRep, MapWire};
use posmap::matspace::{self, OrthonormalBasis, Tolerance};
use posmap::stateclasses;
use posmap::{BasisKind, ComplexMatrix, Error, C64};
use serde::Serialize;

use crate::args::{
    CheckArgs, Command, ConvertArgs, DecomposeArgs, DemoCommand, GenCommand, MemberArgs, Target,
    WitnessArgs,
};
use crate::io::{emit, read_json, read_map, read_matrix, read_state, CliError};
use crate::table::{complex, real, Table};

pub struct Ctx {
    pub tol: Tolerance,
    pub verbose: bool,
}

pub fn run(cmd: Command, ctx: &Ctx) -> Result<(), CliError> {
    match cmd {
        Command::Convert(a) => convert(a, ctx),
        Command::Check(a) => check(a, ctx),
        Command::Spectrum(a) => spectrum(&read_map(&a.map, ctx.tol)?, ctx),
        Command::Decompose(a) => decompose(a, ctx),
        Command::Gen(g) => generate(g, ctx),
        Command::Member(a) => member(a, ctx),
        Command::Witness(a) => witness(a, ctx),
        Command::Demo(DemoCommand::ExampleMap { d, seed }) => demo_example_map(d, seed, ctx),
    }
}

fn emit_map(phi: &MapRep, ctx: &Ctx) -> Result<(), CliError> {
    if ctx.verbose {
        let mut t = Table::new(
            format!("{} map, d = {}", phi.repr_name(), phi.dim()),
            &["property", "value"],
        );
        t.row(vec![
            "unital".into(),
            maprep::is_unital(phi, ctx.tol).to_string(),
        ]);
        t.row(vec![
            "trace preserving".into(),
            maprep::is_trace_preserving(phi, ctx.tol).to_string(),
        ]);
        t.eprint();
    }
    emit(&MapWire::from_map(phi))
}

fn convert(a: ConvertArgs, ctx: &Ctx) -> Result<(), CliError> {
    let phi = read_map(&a.map, ctx.tol)?;
    let basis = OrthonormalBasis::named(BasisKind::from(a.basis), phi.dim())?;
    let out = match a.to {
        Target::Transfer => MapRep::Transfer(phi.to_transfer().in_basis(&basis)?),
        Target::Choi => MapRep::Choi(phi.to_choi()),
        Target::Aform => MapRep::AForm(phi.to_aform(&basis)?),
        Target::Kraus => MapRep::Kraus(analysis::kraus_from_choi(&phi, ctx.tol)?),
    };
    emit_map(&out, ctx)
}

#[derive(Serialize, Default)]
struct CheckReport {
    d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cp: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_choi_eig: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cp_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ccp: Option<bool>,
    /// Smallest Choi eigenvalue of `φ ∘ transpose`.
    #[serde(skip_serializing_if = "Option::is_none")]
    min_choi_eig_ccp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ccp_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unital: Option<bool>,
    /// `max |φ(I) − I|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    unital_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tp: Option<bool>,
    /// `max |φ*(I) − I|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    tp_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    selfadjoint: Option<bool>,
    /// `max |Ĉ − Ĉ†|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    selfadjoint_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    positive: Option<PositivityVerdict>,
}

fn check(a: CheckArgs, ctx: &Ctx) -> Result<(), CliError> {
    let phi = read_map(&a.map, ctx.tol)?;
    let all = a.all_selected();
    let d = phi.dim();
    let id = ComplexMatrix::identity(d);
    let mut r = CheckReport {
        d,
        ..Default::default()
    };
    if all || a.cp {
        let cp = analysis::is_completely_positive(&phi, ctx.tol)?;
        r.cp = Some(cp.cp);
        r.min_choi_eig = Some(cp.min_choi_eig);
        r.cp_reason = cp.reason;
    }
    if all || a.ccp {
        let ccp = analysis::is_completely_copositive(&phi, ctx.tol)?;
        r.ccp = Some(ccp.cp);
        r.min_choi_eig_ccp = Some(ccp.min_choi_eig);
        r.ccp_reason = ccp.reason;
    }
    if all || a.unital {
        r.unital = Some(maprep::is_unital(&phi, ctx.tol));
        r.unital_defect = Some(phi.apply(&id)?.max_abs_diff(&id));
    }
    if all || a.tp {
        r.tp = Some(maprep::is_trace_preserving(&phi, ctx.tol));
        r.tp_defect = Some(maprep::dual(&phi).apply(&id)?.max_abs_diff(&id));
    }
    if all || a.selfadjoint {
        let c = phi.to_choi();
        r.selfadjoint = Some(maprep::is_selfadjoint(&phi, ctx.tol));
        r.selfadjoint_defect = Some(c.matrix().max_abs_diff(&c.matrix().adjoint()));
    }
    if let Some(n) = a.positive_sample {
        r.positive = Some(analysis::positivity_falsify(&phi, n, a.seed, ctx.tol)?);
    }
    if ctx.verbose {
        let mut t = Table::new(
            format!("checks, d = {d}"),
            &["check", "result", "diagnostic"],
        );
        let mut add = |name: &str, b: Option<bool>, x: Option<f64>, label: &str| {
            if let Some(b) = b {
                t.row(vec![
                    name.into(),
                    b.to_string(),
                    x.map(|x| format!("{label} {}", real(x)))
                        .unwrap_or_default(),
                ]);
            }
        };
        add("cp", r.cp, r.min_choi_eig, "min Choi eig");
        add("ccp", r.ccp, r.min_choi_eig_ccp, "min Choi eig");
        add("unital", r.unital, r.unital_defect, "defect");
        add("tp", r.tp, r.tp_defect, "defect");
        add("selfadjoint", r.selfadjoint, r.selfadjoint_defect, "defect");
        match &r.positive {
            Some(PositivityVerdict::Counterexample {
                sample,
                min_output_eig,
                ..
            }) => t.row(vec![
                "positive".into(),
                "false".into(),
                format!("sample {sample}: min eig {}", real(*min_output_eig)),
            ]),
            Some(PositivityVerdict::NoCounterexampleFound {
                n_samples,
                min_output_eig,
            }) => t.row(vec![
                "positive".into(),
                "unrefuted".into(),
                format!("{n_samples} samples: min eig {}", real(*min_output_eig)),
            ]),
            None => {}
        }
        t.eprint();
    }
    emit(&r)
}

fn spectrum(phi: &MapRep, ctx: &Ctx) -> Result<(), CliError> {
    let report = analysis::spectrum(phi, ctx.tol)?;
    if ctx.verbose {
        let mut t = Table::new(
            format!(
                "spectrum, d = {}: radius {} <= bound {} is {}",
                phi.dim(),
                real(report.spectral_radius),
                real(report.pf_bound),
                report.bound_satisfied
            ),
            &["#", "eigenvalue", "|λ|"],
        );
        for (k, z) in report.eigenvalues.iter().enumerate() {
            t.row(vec![k.to_string(), complex(*z), real(z.norm())]);
        }
        t.eprint();
    }
    emit(&report)
}

fn decompose(a: DecomposeArgs, ctx: &Ctx) -> Result<(), CliError> {
    debug_assert!(a.biorth);
    let phi = read_map(&a.map, ctx.tol)?;
    let dec = analysis::biorthonormal_decomposition(&phi, a.cond_max)?;
    if ctx.verbose {
        let gram = dec.gram();
        let defect = gram.max_abs_diff(&ComplexMatrix::identity(gram.rows()));
        let mut t = Table::new(
            format!(
                "bi-orthonormal decomposition: cond {}, Gram defect {}",
                real(dec.condition_number),
                real(defect)
            ),
            &["#", "λ"],
        );
        for (k, z) in dec.lambdas.iter().enumerate() {
            t.row(vec![k.to_string(), complex(*z)]);
        }
        t.eprint();
    }
    emit(&dec)
}

fn generate(g: GenCommand, ctx: &Ctx) -> Result<(), CliError> {
    let phi = match g {
        GenCommand::Werner { n } => stateclasses::werner_map(n)?,
        GenCommand::Isotropic { n } => stateclasses::isotropic_map(n)?,
        GenCommand::Pinching { projectors } => {
            let p: Vec<ComplexMatrix> = read_json(&projectors)?;
            stateclasses::pinching(&p, ctx.tol)?
        }
        GenCommand::Ball { d } => stateclasses::ball_map(d)?,
        GenCommand::Example { alpha, beta } => {
            let spec = ExampleMapSpec::new(alpha, read_matrix(&beta)?, ctx.tol)?;
            analysis::example_map(&spec)?
        }
    };
    emit_map(&phi, ctx)
}

#[derive(Serialize)]
struct BallVerdict {
    d: usize,
    member: bool,
    purity: f64,
    bound: f64,
}

fn member(a: MemberArgs, ctx: &Ctx) -> Result<(), CliError> {
    let rho = read_state(&a.state, ctx.tol)?;
    if let Some(d) = a.ball {
        check_dim(d, rho.dim())?;
        let v = BallVerdict {
            d,
            member: stateclasses::ball_membership(&rho, ctx.tol),
            purity: matspace::purity(&rho),
            bound: stateclasses::ball_purity_bound(d),
        };
        if ctx.verbose {
            let mut t = Table::new(
                format!("purity ball, d = {d}"),
                &["member", "purity", "bound"],
            );
            t.row(vec![v.member.to_string(), real(v.purity), real(v.bound)]);
            t.eprint();
        }
        return emit(&v);
    }
    let path = a.projection.expect("clap enforces one class");
    let pi = read_map(&path, ctx.tol)?;
    check_dim(pi.dim(), rho.dim())?;
    let v = stateclasses::projection_membership(&rho, &pi, ctx.tol)?;
    if ctx.verbose {
        let mut t = Table::new(
            "projection fixed points",
            &["member", "residual", "witness value"],
        );
        t.row(vec![
            v.member.to_string(),
            real(v.residual),
            v.value.map(real).unwrap_or_else(|| "-".into()),
        ]);
        t.eprint();
    }
    emit(&v)
}

fn witness(a: WitnessArgs, ctx: &Ctx) -> Result<(), CliError> {
    let rho = read_state(&a.state, ctx.tol)?;
    check_dim(a.ball, rho.dim())?;
    let w = stateclasses::ball_witness(&rho, a.samples, a.seed, ctx.tol)?;
    if ctx.verbose {
        let mut t = Table::new(
            format!("ball witness, d = {}", a.ball),
            &[
                "tr(aρ)",
                "min sampled tr(aσ)",
                "tr a >= 0",
                "tr a² <= (tr a)²",
            ],
        );
        t.row(vec![
            real(w.value),
            real(w.sampled_min),
            w.cone.trace_nonneg.to_string(),
            w.cone.trace_sq.to_string(),
        ]);
        t.eprint();
    }
    emit(&w)
}

fn check_dim(expected: usize, got: usize) -> Result<(), CliError> {
    if expected != got {
        return Err(Error::Dimension(format!(
            "expected a {expected}×{expected} state, got {got}×{got}"
        ))
        .into());
    }
    Ok(())
}

#[derive(Serialize)]
struct DemoRow {
    predicted: C64,
    computed: C64,
    deviation: f64,
}

#[derive(Serialize)]
struct DemoReport {
    seed: u64,
    spec: ExampleMapSpec,
    eigenvalues: Vec<DemoRow>,
    max_deviation: f64,
}

fn demo_example_map(d: usize, seed: u64, ctx: &Ctx) -> Result<(), CliError> {
    if d == 0 {
        return Err(Error::Dimension("d must be at least 1".into()).into());
    }
    let raw = ExampleMapSpec::random(&mut matspace::seeded_rng(seed), d);
    let spec = ExampleMapSpec::new(raw.alpha, raw.beta, ctx.tol)?;
    let phi = analysis::example_map(&spec)?;
    let computed = analysis::spectrum(&phi, ctx.tol)?.eigenvalues;
    let predicted = analysis::predicted_eigenvalues(&spec);
    let (pairs, max_deviation) = analysis::match_multisets(&predicted, &computed)
        .ok_or_else(|| Error::Numerical("spectrum size mismatch".into()))?;
    let eigenvalues: Vec<DemoRow> = pairs
        .iter()
        .map(|&(i, j)| DemoRow {
            predicted: predicted[i],
            computed: computed[j],
            deviation: (predicted[i] - computed[j]).norm(),
        })
        .collect();
    if ctx.verbose {
        let mut t = Table::new(
            format!(
                "example map, d = {d}, seed = {seed}: max deviation {}",
                real(max_deviation)
            ),
            &["#", "predicted", "computed", "deviation"],
        );
        for (k, row) in eigenvalues.iter().enumerate() {
            t.row(vec![
                k.to_string(),
                complex(row.predicted),
                complex(row.computed),
                real(row.deviation),
            ]);
        }
        t.eprint();
    }
    emit(&DemoReport {
        seed,
        spec,
        eigenvalues,
        max_deviation,
    })
}
