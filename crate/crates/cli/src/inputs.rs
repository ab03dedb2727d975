//! Input loading, provenance and error plumbing shared by the commands.

use std::fs;
use std::path::{Path, PathBuf};

use multicurve_core::bootstrap::{build_curve_set, parse_quotes_csv, BootstrapConfig, CurveSet, QuoteSets};
use multicurve_core::curve::{InterpScheme, TenorLabel, YieldCurve};
use multicurve_core::timegrid::Date;
use sha2::{Digest, Sha256};

use crate::{CurveSource, Interp};

/// Failure reported as `error,<exit code>,<kind>,<message>` on stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn numerical(kind: &str, message: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn line(&self) -> String {
        format!("error,{},{},{}", self.code, self.kind, self.message.replace('\n', " "))
    }

    /// Tags a core error with the file it came from.
    pub fn at(path: &Path, e: multicurve_core::Error) -> CliError {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    }
}

impl From<multicurve_core::Error> for CliError {
    fn from(e: multicurve_core::Error) -> Self {
        CliError {
            code: if e.is_input() { 2 } else { 3 },
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn warn(kind: &str, message: &str) {
    eprintln!("warning,{kind},{message}");
}

impl From<Interp> for InterpScheme {
    fn from(i: Interp) -> Self {
        match i {
            Interp::Cubic => InterpScheme::LogDiscountMonotoneCubic,
            Interp::Linzero => InterpScheme::LinearZero,
            Interp::Loglinear => InterpScheme::LogLinearDiscount,
        }
    }
}

/// Running hash of everything a command read.
pub struct Provenance {
    command: &'static str,
    hasher: Sha256,
}

impl Provenance {
    pub fn new(command: &'static str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        Provenance { command, hasher }
    }

    pub fn add(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    /// Options that change the output are part of the inputs.
    pub fn option(&mut self, name: &str, value: impl std::fmt::Display) {
        self.add(format!("{name}={value}").as_bytes());
    }

    pub fn header(&self) -> String {
        let digest = hex::encode(self.hasher.clone().finalize());
        format!("# multicurve-pricer v{}, {}, {}\n", env!("CARGO_PKG_VERSION"), self.command, digest)
    }
}

pub fn read(path: &Path, prov: &mut Provenance) -> CliResult<String> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
    prov.add(text.as_bytes());
    Ok(text)
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::input("io", format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))
}

/// Writes to `out`, or stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn parse_date(s: &str) -> CliResult<Date> {
    s.parse().map_err(|e: multicurve_core::Error| CliError::input("invalid_date", e.to_string()))
}

fn sorted_dir(dir: &Path, ext: &str) -> CliResult<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::input("io", format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .collect();
    files.sort();
    Ok(files)
}

/// `label=path` pairs, or directories whose `<label>.csv` files are picked up.
pub fn quote_files(specs: &[String]) -> CliResult<Vec<(TenorLabel, PathBuf)>> {
    let mut out: Vec<(TenorLabel, PathBuf)> = Vec::new();
    for spec in specs {
        if let Some((label, path)) = spec.split_once('=') {
            let label: TenorLabel = label.parse().map_err(|e: multicurve_core::Error| CliError::input("invalid_curve", e.to_string()))?;
            out.push((label, PathBuf::from(path)));
            continue;
        }
        let dir = Path::new(spec);
        if !dir.is_dir() {
            return Err(CliError::input("usage", format!("--quotes expects LABEL=PATH or a directory, got '{spec}'")));
        }
        for path in sorted_dir(dir, "csv")? {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            if let Ok(label) = stem.parse::<TenorLabel>() {
                out.push((label, path));
            }
        }
    }
    for (i, (label, _)) in out.iter().enumerate() {
        if out[..i].iter().any(|(l, _)| l == label) {
            return Err(CliError::input("usage", format!("quote set {label} given twice")));
        }
    }
    if out.is_empty() {
        return Err(CliError::input("usage", "no quote files found"));
    }
    out.sort_by_key(|(l, _)| *l);
    Ok(out)
}

pub fn load_quotes(specs: &[String], prov: &mut Provenance) -> CliResult<QuoteSets> {
    let mut sets = QuoteSets::new();
    for (label, path) in quote_files(specs)? {
        let text = read(&path, prov)?;
        prov.option("label", label);
        let quotes = parse_quotes_csv(&text).map_err(|e| CliError::at(&path, e))?;
        if quotes.is_empty() {
            return Err(CliError::input("empty_input", format!("{}: no quotes", path.display())));
        }
        sets.insert(label, quotes);
    }
    Ok(sets)
}

pub fn bootstrap_config(interp: Option<Interp>, ref_date: Option<&str>, prov: &mut Provenance) -> CliResult<BootstrapConfig> {
    let mut config = BootstrapConfig::default();
    if let Some(i) = interp {
        config.interpolation = i.into();
    }
    if let Some(d) = ref_date {
        config.reference_date = Some(parse_date(d)?);
    }
    prov.option("interp", config.interpolation);
    prov.option("ref_date", ref_date.unwrap_or("-"));
    Ok(config)
}

/// Builds the curves and warns about quotes dropped on shared pillar dates.
pub fn build(sets: &QuoteSets, config: &BootstrapConfig) -> CliResult<CurveSet> {
    let set = build_curve_set(sets, config)?;
    for (label, q) in &set.dropped {
        warn("duplicate_pillar", &format!("{label}: {} dropped in favour of a higher-precedence quote on {}", q.label(), q.end));
    }
    Ok(set)
}

pub fn load_curves(paths: &[PathBuf], interp: Option<Interp>, prov: &mut Provenance) -> CliResult<CurveSet> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            files.extend(sorted_dir(p, "json")?);
        } else {
            files.push(p.clone());
        }
    }
    let mut curves: Vec<YieldCurve> = Vec::new();
    for path in &files {
        let text = read(path, prov)?;
        let mut curve = YieldCurve::from_json(&text).map_err(|e| CliError::at(path, e))?;
        if let Some(i) = interp {
            curve = curve.with_interpolation(i.into());
        }
        if curves.iter().any(|c| c.tenor_label() == curve.tenor_label()) {
            return Err(CliError::input("duplicate_curve", format!("{}: second {} curve", path.display(), curve.tenor_label())));
        }
        curves.push(curve);
    }
    let pos = curves
        .iter()
        .position(|c| c.tenor_label() == TenorLabel::Discount)
        .ok_or_else(|| CliError::input("missing_curve", "no discount curve among the curve files"))?;
    let mut set = CurveSet::new(curves.remove(pos));
    for c in curves {
        set.insert(c)?;
    }
    prov.option("interp", interp.map(InterpScheme::from).map(|s| s.name()).unwrap_or("-"));
    Ok(set)
}

/// Curves from `--curves` or by bootstrapping `--quotes`.
pub fn curve_set(source: &CurveSource, prov: &mut Provenance) -> CliResult<(CurveSet, Option<QuoteSets>)> {
    if !source.curves.is_empty() {
        if source.ref_date.is_some() {
            warn("ignored_option", "--ref-date only applies when bootstrapping from quotes");
        }
        return Ok((load_curves(&source.curves, source.interp, prov)?, None));
    }
    if source.quotes.is_empty() {
        return Err(CliError::input("usage", "either --quotes or --curves is required"));
    }
    let sets = load_quotes(&source.quotes, prov)?;
    let config = bootstrap_config(source.interp, source.ref_date.as_deref(), prov)?;
    Ok((build(&sets, &config)?, Some(sets)))
}
