use std::fs::File;
use std::io::Write;

use darboux_core::catalog::{catalog_get, family_from_id, family_listing, pole_c};
use darboux_core::exactrat::{parse_rational, rat, rational_to_f64, Rational};
use darboux_core::kdv::kdv_check;
use darboux_core::scattering::{geometric_grid, levinson_from_samples, phase_samples, write_phase_csv, ScatteringPiece};
use darboux_core::schrodinger::{eigenvalues, piece_eigen, Grid, GridOptions};
use darboux_core::spectral::{spectral_equation_build, spectral_roots, write_spectrum_csv, SpectrumRow};
use darboux_core::verify::{run_criterion, Profile, Report, CRITERIA};
use darboux_core::{Family, PieceCharacter, PotentialSpec};
use serde_json::json;

use crate::{Cli, Command, FamilyArgs, Failure, Format, FormChoice, Side, Tolerance};

type Out<'a> = &'a mut Vec<u8>;

pub fn run(cli: &Cli, out: Out) -> Result<(), Failure> {
    match &cli.command {
        Command::Potential { family, range, samples } => potential(family, range, *samples, cli.format, out),
        Command::Boundstate { family, piece, count, bracket, step, psi_out } => {
            boundstate(family, *piece, *count, bracket.as_deref(), *step, psi_out.as_ref(), cli.format, out)
        }
        Command::Spectrum { n, mu, count, form } => spectrum(*n, mu, *count, *form, cli.format, out),
        Command::Phaseshift { family, side, kmin, kmax, count } => {
            phaseshift(family, *side, *kmin, *kmax, *count, cli.format, out)
        }
        Command::KdvCheck { candidate, v } => {
            let verdict = kdv_check(candidate, *v)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&verdict).expect("serializable"))?;
            let ok = verdict.exact != Some(false) && verdict.max_numeric_residual < 1e-10;
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::VerifyAll { tolerance, criteria } => verify_all(*tolerance, criteria.as_deref(), cli.format, out),
        Command::Families => {
            writeln!(out, "{}", serde_json::to_string_pretty(&family_listing()).expect("serializable"))?;
            Ok(())
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn fmt(v: f64) -> String {
    format!("{v:.11e}")
}

fn parse_mu(mu: Option<&str>) -> Result<Option<Rational>, Failure> {
    let Some(s) = mu else { return Ok(None) };
    let q = parse_rational(s)?;
    if q <= rat(0) {
        return Err(usage(format!("mu must be positive, got {s}")));
    }
    Ok(Some(q))
}

fn resolve(args: &FamilyArgs) -> Result<(Family, PotentialSpec), Failure> {
    let family = family_from_id(&args.family, args.n, parse_mu(args.mu.as_deref())?)?;
    let spec = catalog_get(&family)?;
    Ok((family, spec))
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), Failure> {
    let bad = || usage(format!("{what} must look like 'a,b' with a < b, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a < b) {
        return Err(bad());
    }
    Ok((a, b))
}

fn potential(args: &FamilyArgs, range: &str, samples: usize, format: Format, out: Out) -> Result<(), Failure> {
    let (_, spec) = resolve(args)?;
    let (a, b) = parse_pair(range, "range")?;
    if samples < 2 {
        return Err(usage("samples must be at least 2"));
    }
    let mut poles: Vec<f64> = spec
        .pieces
        .iter()
        .flat_map(|p| [p.lo.at, p.hi.at])
        .filter(|x| x.is_finite() && *x >= a && *x <= b)
        .collect();
    poles.sort_by(f64::total_cmp);
    poles.dedup();
    let near_pole = |x: f64| poles.iter().any(|p| (x - p).abs() <= 1e-9 * p.abs().max(1.0));
    // (x, V, piece, is_pole)
    let mut rows: Vec<(f64, Option<f64>, Option<usize>, bool)> = (0..samples)
        .map(|i| a + (b - a) * i as f64 / (samples - 1) as f64)
        .filter(|&x| !near_pole(x))
        .map(|x| (x, spec.eval(x).ok().filter(|v| v.is_finite()), spec.piece_of(x), false))
        .collect();
    rows.extend(poles.iter().map(|&p| (p, None, None, true)));
    rows.sort_by(|l, r| l.0.total_cmp(&r.0));
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["x", "V", "piece", "pole"]).map_err(csv_err)?;
            for (x, v, piece, pole) in &rows {
                w.write_record([
                    fmt(*x),
                    v.map(fmt).unwrap_or_default(),
                    piece.map(|p| p.to_string()).unwrap_or_default(),
                    u8::from(*pole).to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(x, v, piece, pole)| json!({"x": x, "V": v, "piece": piece, "pole": pole}))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("serializable"))?;
        }
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Compute(format!("csv: {e}"))
}

#[allow(clippy::too_many_arguments)]
fn boundstate(
    args: &FamilyArgs,
    piece: Option<usize>,
    count: usize,
    bracket: Option<&str>,
    step: f64,
    psi_out: Option<&std::path::PathBuf>,
    format: Format,
    out: Out,
) -> Result<(), Failure> {
    let (_, spec) = resolve(args)?;
    if !(step > 0.0 && step < 0.1) {
        return Err(usage("step must be in (0, 0.1)"));
    }
    let index = match piece {
        Some(i) if i < spec.pieces.len() => i,
        Some(i) => return Err(usage(format!("piece {i} out of range (family has {})", spec.pieces.len()))),
        None => spec
            .pieces
            .iter()
            .position(|p| matches!(p.character, PieceCharacter::Confining | PieceCharacter::ScatteringWithBoundState | PieceCharacter::WholeLine))
            .ok_or_else(|| usage("no piece of this family can bind; pass --piece"))?,
    };
    let bracket = match bracket {
        Some(s) => parse_pair(s, "bracket")?,
        None if spec.pieces[index].character == PieceCharacter::Confining => (-100.0, 5000.0),
        None => (-100.0, -1e-9),
    };
    let opts = GridOptions { h: step, ..GridOptions::default() };
    let states = piece_eigen(&spec, index, bracket, count, opts)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["level", "E", "nodes", "norm"]).map_err(csv_err)?;
            for (j, s) in states.iter().enumerate() {
                w.write_record([j.to_string(), fmt(s.energy), s.nodes.to_string(), fmt(s.norm)]).map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<_> = states
                .iter()
                .enumerate()
                .map(|(j, s)| json!({"level": j, "E": s.energy, "nodes": s.nodes, "norm": s.norm}))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&json!({"piece": index, "states": rows})).expect("serializable"))?;
        }
    }
    if let Some(path) = psi_out {
        let first = states.first().ok_or_else(|| Failure::Compute("no bound state in the bracket".into()))?;
        first.write_csv(File::create(path)?)?;
    }
    Ok(())
}

fn spectrum(n: u32, mu: &str, count: usize, form: FormChoice, format: Format, out: Out) -> Result<(), Failure> {
    if count == 0 {
        return Err(usage("count must be positive"));
    }
    let mu_q = parse_mu(Some(mu))?.expect("present");
    let c = pole_c(n, rational_to_f64(&mu_q));
    let mut eq = spectral_equation_build(n, c)?;
    if form == FormChoice::Constructed {
        eq = eq.with_constructed();
    }
    let roots = spectral_roots(&eq, count);
    let spec = catalog_get(&Family::ZeroEnergyPartner { n, mu: mu_q })?;
    let grid = Grid::new(&spec, &spec.pieces[1], GridOptions::default())?;
    let floor = grid.v.iter().copied().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min) - 1.0;
    // Bracket from the chain-built roots, which are the true levels.
    let reference = spectral_roots(&eq.with_constructed(), count);
    let top = roots.iter().chain(&reference).map(|r| r.energy).fold(0.0, f64::max) * 1.5 + 10.0;
    let levels = eigenvalues(&grid, (floor, top), count)?;
    if levels.len() < count {
        return Err(Failure::Compute(format!("Numerov found {} of {count} levels", levels.len())));
    }
    let rows: Vec<SpectrumRow> = roots
        .iter()
        .zip(&levels)
        .map(|(r, &e)| SpectrumRow {
            n,
            m: r.m,
            kappa_m: r.kappa,
            e_m: r.energy,
            e_m_numerov: e,
            rel_diff: (e - r.energy).abs() / r.energy.abs(),
        })
        .collect();
    match format {
        Format::Csv => write_spectrum_csv(&rows, &mut *out)?,
        Format::Json => {
            let body = json!({"n": n, "c": c, "form": eq.source, "printed_matches": eq.printed_matches, "rows": rows});
            writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("serializable"))?;
        }
    }
    Ok(())
}

fn scattering_piece(args: &FamilyArgs, side: Side) -> Result<ScatteringPiece, Failure> {
    let n = args.n;
    let need_n = || n.ok_or_else(|| usage(format!("family {} needs --n", args.family)));
    Ok(match (args.family.as_str(), side) {
        ("10", Side::Right) => ScatteringPiece::FirstPartnerRight,
        ("10", Side::Left) => ScatteringPiece::FirstPartnerLeft,
        ("22", Side::Right) => ScatteringPiece::Right(2),
        ("22", Side::Left) => ScatteringPiece::Left(2),
        ("32", side) => match (need_n()?, side) {
            (0, _) => return Err(usage("family 32 needs n >= 1")),
            (1, Side::Right) => ScatteringPiece::FirstPartnerRight,
            (1, Side::Left) => ScatteringPiece::FirstPartnerLeft,
            (n, Side::Right) => ScatteringPiece::Right(n),
            (n, Side::Left) => ScatteringPiece::Left(n),
        },
        ("37" | "5", Side::Right) => ScatteringPiece::Centrifugal(need_n()?),
        ("37" | "5", Side::Left) => return Err(usage("the centrifugal family lives on x > 0; use --side right")),
        (other, _) => return Err(usage(format!("no half-line scattering piece for family {other}"))),
    })
}

fn phaseshift(args: &FamilyArgs, side: Side, kmin: f64, kmax: f64, count: usize, format: Format, out: Out) -> Result<(), Failure> {
    if !(kmin > 0.0 && kmin < kmax) || count < 2 {
        return Err(usage("need 0 < kmin < kmax and count >= 2"));
    }
    let piece = scattering_piece(args, side)?;
    let mu = parse_mu(args.mu.as_deref())?.unwrap_or_else(|| rat(1));
    let (spec, index) = piece.realize(&mu)?;
    let ks = geometric_grid(kmin, kmax, count);
    let mut samples = phase_samples(&spec, index, &ks, 1e-3)?;
    for s in &mut samples {
        s.piece = piece.id();
    }
    let span = levinson_from_samples(&spec, index, &samples, piece.bound_states())?;
    match format {
        Format::Csv => write_phase_csv(&samples, &span.deltas, &mut *out)?,
        Format::Json => {
            let rows: Vec<_> = samples
                .iter()
                .zip(&span.deltas)
                .map(|(s, d)| json!({"k": s.k, "re_s": s.s.re, "im_s": s.s.im, "delta_unwrapped": d}))
                .collect();
            let body = json!({
                "piece": piece.id(),
                "samples": rows,
                "delta_zero": span.delta_zero,
                "delta_inf": span.delta_inf,
                "span": span.span,
                "raw_span": span.raw_span,
                "ledger": span.ledger,
                "ledger_span": span.ledger_span,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("serializable"))?;
        }
    }
    Ok(())
}

fn verify_all(tolerance: Tolerance, criteria: Option<&str>, format: Format, out: Out) -> Result<(), Failure> {
    let profile = match tolerance {
        Tolerance::Default => Profile::Default,
        Tolerance::Strict => Profile::Strict,
    };
    let selected: Vec<u8> = match criteria {
        None => CRITERIA.iter().map(|c| c.0).collect(),
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse::<u8>().map_err(|_| usage(format!("bad criterion {t:?}"))))
            .collect::<Result<_, _>>()?,
    };
    let outcomes = selected
        .iter()
        .map(|&c| run_criterion(c, profile))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = outcomes.iter().all(|o| o.pass);
    let report = Report { profile, criteria: outcomes, pass };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["criterion", "name", "role", "computed", "reference", "tolerance", "pass"]).map_err(csv_err)?;
            for o in &report.criteria {
                for c in &o.checks {
                    w.write_record([
                        o.criterion.to_string(),
                        c.name.clone(),
                        format!("{:?}", c.role).to_lowercase(),
                        fmt(c.computed),
                        fmt(c.reference),
                        fmt(c.tolerance),
                        c.pass.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            w.flush()?;
        }
    }
    for line in report.summary_lines() {
        eprintln!("{line}");
    }
    for o in &report.criteria {
        eprintln!("{}", o.line());
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
