use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use kraus_core::evolve::{
    observable_branches, population_branches, read_populations, read_tilde_expectation,
    vectorized_observable_branches, vectorized_population_branches,
};
use kraus_core::sampler::{estimate_expectation, estimate_populations, sample_branches};
use kraus_core::{
    amplitude_damping_kraus, build_observable, complexity_report, count_lower_nonzeros, dilate,
    ensemble_to_density, two_level_decompose, validate_kraus, BranchOutput, ComplexMatrix,
    ComplexVector, DensityMatrix, KrausSet, Observable, PureStateEnsemble, TimeGrid, STATE_TOL,
};
use serde::Serialize;

use crate::args::{
    ComplexityArgs, DilateArgs, ExpectArgs, MethodArg, ModeArg, RunArgs, ValidateArgs,
};
use crate::error::{CliError, CliResult};
use crate::format::{load_ensemble, load_kraus, load_matrix, to_pretty_json, GateJson, MatrixJson};

/// `x` with 12 significant digits; scientific notation outside `[1e-6, 1e15)`.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-6..15).contains(&exp) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Time in picoseconds with 4 decimals.
pub fn time_ps(t: f64) -> String {
    let ps = t * 1e12;
    format!("{:.4}", if ps == 0.0 { 0.0 } else { ps })
}

fn write_output(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout.write_all(bytes).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

enum Channel {
    AmplitudeDamping(f64),
    Fixed(KrausSet),
}

impl Channel {
    fn at(&self, t: f64) -> CliResult<KrausSet> {
        match self {
            Channel::AmplitudeDamping(gamma) => Ok(amplitude_damping_kraus(*gamma, t)?),
            Channel::Fixed(ks) => Ok(ks.clone()),
        }
    }
}

enum Input {
    Ensemble(PureStateEnsemble),
    Density(DensityMatrix),
}

struct Run {
    channel: Channel,
    input: Input,
    grid: TimeGrid,
    dim: usize,
    shots: Option<u64>,
    seed: u64,
}

fn default_ensemble() -> PureStateEnsemble {
    let r = 0.5f64.sqrt();
    let plus = ComplexVector::from_real(&[r, r]).expect("finite");
    PureStateEnsemble::new(
        vec![(0.5, ComplexVector::basis(2, 1)), (0.5, plus)],
        STATE_TOL,
    )
    .expect("valid ensemble")
}

fn hadamard() -> ComplexMatrix {
    let r = 0.5f64.sqrt();
    ComplexMatrix::from_real(2, 2, &[r, r, r, -r]).expect("finite")
}

fn prepare(args: &RunArgs) -> CliResult<Run> {
    let channel = match &args.kraus {
        Some(path) => {
            let ks = load_kraus(path)?;
            Channel::Fixed(KrausSet::validated(ks.operators().to_vec(), args.tol)?)
        }
        None => Channel::AmplitudeDamping(args.gamma),
    };
    let input = match (&args.state, &args.density, args.method) {
        (_, Some(_), MethodArg::Ensemble) => {
            return Err(CliError::Usage(
                "--density requires --method vectorized".into(),
            ));
        }
        (_, Some(path), MethodArg::Vectorized) => {
            Input::Density(DensityMatrix::new(load_matrix(path)?, STATE_TOL)?)
        }
        (Some(path), None, method) => vectorize_if(load_ensemble(path)?, method),
        (None, None, method) => vectorize_if(default_ensemble(), method),
    };
    let grid = TimeGrid::new(args.t_start, args.t_end, args.dt)?;
    let shots = match args.mode {
        ModeArg::Exact => None,
        ModeArg::Shots if args.shots == 0 => {
            return Err(CliError::Usage("--shots must be at least 1".into()))
        }
        ModeArg::Shots => Some(args.shots),
    };
    let dim = match &input {
        Input::Ensemble(e) => e.dim(),
        Input::Density(rho) => rho.dim(),
    };
    let channel_dim = channel.at(args.t_start.max(0.0))?.dim();
    if channel_dim != dim {
        return Err(kraus_core::Error::DimensionMismatch {
            expected: channel_dim,
            found: dim,
        }
        .into());
    }
    Ok(Run {
        channel,
        input,
        grid,
        dim,
        shots,
        seed: args.seed,
    })
}

fn vectorize_if(e: PureStateEnsemble, method: MethodArg) -> Input {
    match method {
        MethodArg::Ensemble => Input::Ensemble(e),
        MethodArg::Vectorized => Input::Density(ensemble_to_density(&e)),
    }
}

fn parse_basis(spec: &str) -> CliResult<Option<ComplexMatrix>> {
    match spec {
        "identity" => Ok(None),
        "hadamard" => Ok(Some(hadamard())),
        path => Ok(Some(load_matrix(Path::new(path))?)),
    }
}

fn csv_bytes(header: Vec<String>, rows: Vec<Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Csv(e.into_error().into()))
}

pub fn evolve(args: &RunArgs, stdout: &mut dyn Write) -> CliResult<u8> {
    let run = prepare(args)?;
    let basis = parse_basis(&args.basis)?;
    let mut header = vec!["time_ps".to_string()];
    header.extend((0..run.dim).map(|j| format!("pop_{j}")));
    if run.shots.is_some() {
        header.extend((0..run.dim).map(|j| format!("shot_pop_{j}")));
    }
    let mut rows = Vec::with_capacity(run.grid.len());
    for (step, t) in run.grid.points().into_iter().enumerate() {
        let ks = run.channel.at(t)?;
        let branches = match &run.input {
            Input::Ensemble(e) => population_branches(e, &ks, basis.as_ref())?,
            Input::Density(rho) => vectorized_population_branches(rho, &ks, basis.as_ref())?,
        };
        let mut row = vec![time_ps(t)];
        row.extend(read_populations(&branches)?.into_iter().map(sig12));
        if let Some(shots) = run.shots {
            let records = sample_branches(&branches, shots, run.seed, step as u64)?;
            row.extend(
                estimate_populations(&branches, &records)?
                    .into_iter()
                    .map(sig12),
            );
        }
        rows.push(row);
    }
    write_output(args.out.as_deref(), &csv_bytes(header, rows)?, stdout)?;
    Ok(0)
}

pub fn expect(args: &ExpectArgs, stdout: &mut dyn Write) -> CliResult<u8> {
    let run = prepare(&args.run)?;
    if args.run.basis != "identity" {
        return Err(CliError::Usage("--basis applies to evolve only".into()));
    }
    let obs: Observable = build_observable(&load_matrix(&args.observable)?)?;
    let mut header = vec!["time_ps".to_string(), "expectation".to_string()];
    if run.shots.is_some() {
        header.push("shot_expectation".to_string());
    }
    let mut rows = Vec::with_capacity(run.grid.len());
    for (step, t) in run.grid.points().into_iter().enumerate() {
        let ks = run.channel.at(t)?;
        let branches: Vec<BranchOutput> = match &run.input {
            Input::Ensemble(e) => observable_branches(e, &ks, &obs)?,
            Input::Density(rho) => vectorized_observable_branches(rho, &ks, &obs)?,
        };
        let mut row = vec![
            time_ps(t),
            sig12(obs.expectation_from_tilde(read_tilde_expectation(&branches)?)),
        ];
        if let Some(shots) = run.shots {
            let records = sample_branches(&branches, shots, run.seed, step as u64)?;
            row.push(sig12(estimate_expectation(&branches, &records, &obs)?));
        }
        rows.push(row);
    }
    write_output(args.run.out.as_deref(), &csv_bytes(header, rows)?, stdout)?;
    Ok(0)
}

pub fn validate(args: &ValidateArgs, stdout: &mut dyn Write) -> CliResult<u8> {
    let ks = load_kraus(&args.kraus)?;
    let report = validate_kraus(&ks, args.tol);
    let mut text = format!(
        "completeness_residual = {}\n",
        sig12(report.completeness_residual)
    );
    for (k, norm) in report.operator_norms.iter().enumerate() {
        text.push_str(&format!("operator_norm[{k}] = {}\n", sig12(*norm)));
    }
    text.push_str(if report.passed {
        "verdict: PASS\n"
    } else {
        "verdict: FAIL\n"
    });
    write_output(None, text.as_bytes(), stdout)?;
    Ok(if report.passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct DilationJson {
    order: usize,
    dim: usize,
    unitary: MatrixJson,
    is_unitary: bool,
    unitarity_residual: f64,
    power_residual: f64,
}

pub fn dilate_cmd(args: &DilateArgs, stdout: &mut dyn Write) -> CliResult<u8> {
    let a = load_matrix(&args.matrix)?;
    let d = dilate(&a, args.order)?;
    let check = d.check();
    let json = DilationJson {
        order: d.order(),
        dim: d.dim(),
        unitary: MatrixJson::from(d.unitary()),
        is_unitary: check.unitarity_residual <= kraus_core::DEFAULT_TOL,
        unitarity_residual: check.unitarity_residual,
        power_residual: check.power_residual,
    };
    write_output(
        args.out.as_deref(),
        to_pretty_json(&json).as_bytes(),
        stdout,
    )?;
    Ok(0)
}

pub fn complexity(args: &ComplexityArgs, stdout: &mut dyn Write) -> CliResult<u8> {
    let unitary = args.unitary.as_deref().map(load_matrix).transpose()?;
    let n = args
        .n
        .or(unitary.as_ref().map(ComplexMatrix::rows))
        .unwrap_or(2);
    let r = complexity_report(n)?;
    let mut text = format!("n = {n}\n");
    text.push_str(&format!(
        "{:<12}{:<17}{:>14}{:>16}\n",
        "method", "stage", "quantum_gates", "classical_ops"
    ));
    let rows = [
        (
            "ensemble",
            "basic",
            r.ensemble_gates.basic,
            r.ensemble_classical.basic.to_string(),
        ),
        (
            "ensemble",
            "basis-transform",
            r.ensemble_gates.basis_transform,
            r.ensemble_classical.basis_transform.to_string(),
        ),
        (
            "ensemble",
            "observable",
            r.ensemble_gates.observable,
            r.ensemble_classical.observable.to_string(),
        ),
        (
            "vectorized",
            "basic",
            r.vectorized_gates.basic,
            r.vectorized_classical_per_branch.to_string(),
        ),
        (
            "vectorized",
            "basis-transform",
            r.vectorized_gates.basis_transform,
            format!(
                "{}+{}",
                r.vectorized_classical_per_branch, r.vectorized_basis_overhead
            ),
        ),
        (
            "vectorized",
            "observable",
            r.vectorized_gates.observable,
            format!(
                "{}+{}",
                r.vectorized_classical_per_branch, r.vectorized_observable_overhead
            ),
        ),
    ];
    for (method, stage, gates, classical) in rows {
        text.push_str(&format!(
            "{method:<12}{stage:<17}{gates:>14}{classical:>16}\n"
        ));
    }
    text.push_str(&format!(
        "observable preprocessing (classical, once) = {}\n",
        sig12(r.observable_preprocessing)
    ));
    text.push_str(&format!(
        "stinespring (n^3 x n^3 unitary) = {}\n",
        r.stinespring_count
    ));

    if let Some(u) = &unitary {
        let gates = two_level_decompose(u, args.tol)?;
        text.push_str(&format!("measured two-level gates = {}\n", gates.len()));
        text.push_str(&format!(
            "lower-triangular nonzeros = {}\n",
            count_lower_nonzeros(u, args.tol)
        ));
        if let Some(path) = &args.out {
            let list: Vec<GateJson> = gates.iter().map(GateJson::from).collect();
            write_output(Some(path), to_pretty_json(&list).as_bytes(), stdout)?;
        }
    }
    write_output(None, text.as_bytes(), stdout)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(sig12(0.25), "0.250000000000");
        assert_eq!(sig12(-1.57), "-1.57000000000");
        assert_eq!(sig12(123.5), "123.500000000");
        assert_eq!(sig12(0.0), "0.00000000000");
        assert_eq!(sig12(1e-20), "1.00000000000e-20");
        assert_eq!(time_ps(1e-11), "10.0000");
        assert_eq!(time_ps(0.0), "0.0000");
        assert_eq!(time_ps(4.56e-10), "456.0000");
    }

    #[test]
    fn twelve_digits_round_trip() {
        for x in [0.8360, 1.0 / 3.0, -0.69822, 7.5e-5] {
            let back: f64 = sig12(x).parse().unwrap();
            assert!((back - x).abs() <= x.abs() * 1e-11);
        }
    }
}
