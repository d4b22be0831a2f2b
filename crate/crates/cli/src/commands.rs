use std::fs;
use std::io::Write;
use std::path::Path;

use paratangent::analysis::{check_fullness, estimate_jet, flatness_order, FullnessVerdict};
use paratangent::error::Error;
use paratangent::expr::{parse_expr, sample};
use paratangent::format::{
    parse_ifs_spec, parse_points_csv, parse_sequence, to_json, write_points_csv, FlatnessDocument, FullnessDocument,
    HdegDocument, JetDocument, PointTable, PolynomialDocument, RawScalar, SequenceDocument,
};
use paratangent::ifs::{catalog, iterate_word, williams_points};
use paratangent::nodesets::{hdeg, interpolate, select_unisolvent, Selection};
use paratangent::{IfsSystem, NodalSequence, NodeSet, Scalar, Word};

use crate::svg::scatter;
use crate::{CliError, Command, CsvArgs, FlatnessArgs, FractalArgs, FullnessArgs, HdegArgs, Verdict};

/// Deepest Williams enumeration tried when searching for an automatic base.
const AUTO_BASE_DEPTH: usize = 8;

pub fn run<S: Scalar>(command: &Command) -> Result<Verdict, CliError> {
    match command {
        Command::Fractal(args) => fractal::<S>(args),
        Command::Fullness(args) => fullness::<S>(args),
        Command::Flatness(args) => flatness::<S>(args),
        Command::Interp(args) => interp::<S>(args),
        Command::Hdeg(args) => hdeg_command::<S>(args),
        Command::Jet(args) => jet::<S>(args),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to standard output: {e}")))
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn check_degree(d: u32) -> Result<(), CliError> {
    if d == 0 {
        return Err(usage("degree must be at least 1"));
    }
    Ok(())
}

fn check_threshold(t: f64) -> Result<(), CliError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(usage("threshold must be a positive number"));
    }
    Ok(())
}

fn plot<S: Scalar>(path: Option<&Path>, points: &[Vec<S>]) -> Result<(), CliError> {
    if let Some(path) = path {
        let floats: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(Scalar::to_f64).collect()).collect();
        fs::write(path, scatter(&floats)).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn auto_base<S: Scalar>(system: &IfsSystem<S>, d: u32) -> Result<NodeSet<S>, CliError> {
    for depth in 1..=AUTO_BASE_DEPTH {
        let points = match williams_points(system, depth) {
            Ok(points) => points,
            Err(Error::TooManyWords { .. }) => break,
            Err(e) => return Err(e.into()),
        };
        if let Selection::Unisolvent(nodes) = select_unisolvent(&points, system.dim(), d)? {
            return Ok(nodes);
        }
    }
    Err(usage(format!(
        "no unisolvent subset of degree {d} among the Williams points"
    )))
}

fn fractal<S: Scalar>(args: &FractalArgs) -> Result<Verdict, CliError> {
    let system: IfsSystem<S> = match (&args.name, &args.spec) {
        (Some(name), None) => catalog(name)?,
        (None, Some(path)) => parse_ifs_spec(&read(path)?)?,
        _ => return Err(usage("give either a catalog name or --spec")),
    };
    if let Some(depth) = args.depth {
        let points = williams_points(&system, depth)?;
        emit(args.out.as_deref(), &write_points_csv(&points, None))?;
        plot(args.plot.as_deref(), &points)?;
        return Ok(Verdict::Positive);
    }
    let word: Word = args
        .word
        .as_deref()
        .ok_or_else(|| usage("give --depth or --word"))?
        .parse()?;
    check_degree(args.degree)?;
    if args.iters == 0 {
        return Err(usage("--iters must be at least 1"));
    }
    let base = match args.base.as_str() {
        "vertices" => NodeSet::new(system.vertices()?)?,
        "auto" => auto_base(&system, args.degree)?,
        path => {
            let table: PointTable<S> = parse_points_csv(&read(Path::new(path))?)?;
            NodeSet::new(table.points)?
        }
    };
    let seq = iterate_word(&system, &word, &base, args.iters)?;
    emit(
        args.out.as_deref(),
        &to_json(&SequenceDocument::from_sequence(&seq, args.degree, None)),
    )?;
    let points: Vec<Vec<S>> = seq.entries().iter().flat_map(|e| e.nodes.points().to_vec()).collect();
    plot(args.plot.as_deref(), &points)?;
    Ok(Verdict::Positive)
}

fn fullness<S: Scalar>(args: &FullnessArgs) -> Result<Verdict, CliError> {
    check_threshold(args.threshold)?;
    let loaded = parse_sequence::<S>(&read(&args.sequence)?)?;
    let d = args.degree.unwrap_or(loaded.d);
    check_degree(d)?;
    let report = check_fullness(&loaded.sequence, d, args.threshold)?;
    emit(args.out.as_deref(), &to_json(&FullnessDocument::from_report(&report)))?;
    Ok(if report.verdict == FullnessVerdict::Satisfied {
        Verdict::Positive
    } else {
        Verdict::Negative
    })
}

fn sequence_values<S: Scalar>(
    args: &FlatnessArgs,
    seq: &NodalSequence<S>,
    embedded: Option<Vec<Vec<S>>>,
) -> Result<Vec<Vec<S>>, CliError> {
    if let Some(src) = &args.function {
        let expr = parse_expr(src, seq.dim())?;
        return seq
            .entries()
            .iter()
            .map(|e| sample(&expr, e.nodes.points()).map_err(CliError::from))
            .collect();
    }
    if let Some(path) = &args.values {
        let raw: Vec<Vec<RawScalar>> =
            serde_json::from_str(&read(path)?).map_err(|e| usage(format!("values file: {e}")))?;
        return raw
            .iter()
            .map(|row| row.iter().map(|v| v.parse::<S>().map_err(CliError::from)).collect())
            .collect();
    }
    embedded.ok_or_else(|| usage("no values: give --function, --values, or a sequence with values"))
}

fn flatness<S: Scalar>(args: &FlatnessArgs) -> Result<Verdict, CliError> {
    check_threshold(args.threshold)?;
    let loaded = parse_sequence::<S>(&read(&args.sequence)?)?;
    let d = args.degree.unwrap_or(loaded.d);
    check_degree(d)?;
    let values = sequence_values(args, &loaded.sequence, loaded.values)?;
    let report = flatness_order(&loaded.sequence, &values, args.p, d, args.e, args.threshold)?;
    emit(
        args.out.as_deref(),
        &to_json(&FlatnessDocument::from_report(S::MODE, d, &report)),
    )?;
    Ok(if report.verdict.is_flat() {
        Verdict::Positive
    } else {
        Verdict::Negative
    })
}

fn table_with_values<S: Scalar>(path: &Path) -> Result<(NodeSet<S>, Vec<S>), CliError> {
    let table: PointTable<S> = parse_points_csv(&read(path)?)?;
    let values = table.values.ok_or_else(|| usage("CSV needs a 'value' column"))?;
    Ok((NodeSet::new(table.points)?, values))
}

fn interp<S: Scalar>(args: &CsvArgs) -> Result<Verdict, CliError> {
    check_degree(args.degree)?;
    let (nodes, values) = table_with_values::<S>(&args.input)?;
    let poly = interpolate(&nodes, &values, args.degree)?;
    emit(
        args.out.as_deref(),
        &to_json(&PolynomialDocument::from_polynomial(&poly)),
    )?;
    Ok(Verdict::Positive)
}

fn hdeg_command<S: Scalar>(args: &HdegArgs) -> Result<Verdict, CliError> {
    let table: PointTable<S> = parse_points_csv(&read(&args.input)?)?;
    let result = hdeg(&table.points, args.bound)?;
    emit(args.out.as_deref(), &to_json(&HdegDocument::from_result(&result)))?;
    Ok(Verdict::Positive)
}

fn jet<S: Scalar>(args: &CsvArgs) -> Result<Verdict, CliError> {
    check_degree(args.degree)?;
    let (nodes, values) = table_with_values::<S>(&args.input)?;
    let estimate = estimate_jet(&nodes, &values, args.degree)?;
    emit(args.out.as_deref(), &to_json(&JetDocument::from_estimate(&estimate)?))?;
    Ok(Verdict::Positive)
}
