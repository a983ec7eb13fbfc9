//! The `forge` command line: build stage chains, run verification suites,
//! lift endomorphisms and export structures.
//!
//! Every command produces a JSON document on stdout and a short summary for
//! stderr. Outputs contain no timestamps or paths of their own, so the same
//! inputs give byte-identical results.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forge_core::dot::to_dot;
use forge_core::json::{from_json, to_json};
use forge_core::lifting::{lift, CayleyRoot, Star};
use forge_core::limits::{build_stages_within, enumerate_extensions, stage_ceiling, CatalogParams, StageChain};
use forge_core::presets::RootPreset;
use forge_core::suites::{self, SuiteReport};
use forge_core::{FiniteStructure, Morphism, Rational, StructureClass};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] forge_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "forge", version, about = "Fraïssé stages, strict pushouts and lifted endomorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build F₀ ⊆ F₁ ⊆ … ⊆ F_k and write one JSON file per stage.
    Build(BuildArgs),
    /// Run a verification suite; exits non-zero unless every check passes.
    Verify(VerifyArgs),
    /// Lift an endomorphism of the root to its star.
    Lift(LiftArgs),
    /// Re-emit a stage file as canonical JSON or Graphviz DOT.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CatalogArgs {
    /// Largest base size in each one-point extension catalog.
    #[arg(long = "max-base", default_value_t = 2)]
    pub max_base: usize,
    /// Distance grid for metric catalogs, e.g. `1,2` or `1/2,1`.
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<Rational>,
    /// Stage ceiling in elements; defaults to FORGE_MAX_CARRIER or 5000.
    #[arg(long)]
    pub ceiling: Option<usize>,
}

impl CatalogArgs {
    fn params(&self, class: StructureClass, default_grid: &[i64]) -> CatalogParams {
        let grid = if class != StructureClass::Metric {
            Vec::new()
        } else if self.grid.is_empty() {
            default_grid.iter().map(|&g| Rational::integer(g)).collect()
        } else {
            self.grid.clone()
        };
        CatalogParams::with_grid(self.max_base, grid)
    }

    fn ceiling(&self) -> Result<usize> {
        Ok(match self.ceiling {
            Some(c) => c,
            None => stage_ceiling()?,
        })
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub class: Option<StructureClass>,
    /// A preset (`edgeless:n`, `antichain:n`, `simplex:n:d`,
    /// `freesemilattice:n`) or a structure JSON file.
    #[arg(long)]
    pub root: String,
    #[arg(long, default_value_t = 1)]
    pub stages: usize,
    #[command(flatten)]
    pub catalog: CatalogArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write `stage_n.dot` (graphs, posets and semilattices).
    #[arg(long)]
    pub dot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Axioms,
    PushoutOracle,
    Homogeneity,
    Functoriality,
    Cayley,
    CongruenceExtension,
    FreeSum,
    ExtensionProperty,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub class: Option<StructureClass>,
    #[arg(long)]
    pub root: Option<String>,
    /// A directory written by `build`.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Stages to build when the chain comes from `--root`.
    #[arg(long, default_value_t = 1)]
    pub stages: usize,
    /// Largest base (pushout-oracle, congruence-extension) or root
    /// (free-sum) enumerated.
    #[arg(long = "max-size")]
    pub max_size: Option<usize>,
    /// Largest test object for the pushout oracle.
    #[arg(long = "object-size", default_value_t = 3)]
    pub object_size: usize,
    /// Largest number of pairs in a free-sum amalgam.
    #[arg(long, default_value_t = 3)]
    pub pairs: usize,
    #[command(flatten)]
    pub catalog: CatalogArgs,
    /// Treat skipped checks as acceptable for the exit code.
    #[arg(long = "allow-skips")]
    pub allow_skips: bool,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[arg(long)]
    pub root: String,
    /// Images of the root elements by position, e.g. `1,0`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub map: Vec<usize>,
    #[command(flatten)]
    pub catalog: CatalogArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// A structure JSON file, e.g. `stage_1.json`.
    #[arg(long)]
    pub stage: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a command printed and whether its checks held.
#[derive(Debug)]
pub struct RunOutput {
    pub stdout: String,
    pub summary: String,
    pub passed: bool,
    pub skipped: bool,
}

impl RunOutput {
    pub fn exit_code(&self, allow_skips: bool) -> u8 {
        if self.passed && (!self.skipped || allow_skips) {
            0
        } else {
            1
        }
    }
}

pub fn run(cli: &Cli) -> Result<RunOutput> {
    match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Lift(a) => cmd_lift(a),
        Command::Export(a) => cmd_export(a),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn pretty(value: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// The root and the hash of its canonical document.
pub fn load_root(spec: &str, class: Option<StructureClass>) -> Result<(Arc<FiniteStructure>, String)> {
    let path = Path::new(spec);
    let root = if path.is_file() {
        from_json(&read(path)?)?
    } else {
        let preset: RootPreset = spec.parse().map_err(|e: forge_core::Error| {
            CliError::Usage(format!("--root {spec:?} is neither a file nor a preset: {e}"))
        })?;
        preset.build()?
    };
    if let Some(c) = class {
        if c != root.class() {
            return Err(CliError::Usage(format!("--class {c} does not match the root, which is a {}", root.class())));
        }
    }
    let hash = sha256_hex(to_json(&root).as_bytes());
    Ok((Arc::new(root), hash))
}

fn stage_file(n: usize) -> String {
    format!("stage_{n}.json")
}

fn cmd_build(a: &BuildArgs) -> Result<RunOutput> {
    let (root, root_hash) = load_root(&a.root, a.class)?;
    let class = root.class();
    let params = a.catalog.params(class, &[1, 2]);
    let ceiling = a.catalog.ceiling()?;
    let chain = build_stages_within(root, a.stages, &params, ceiling)?;
    fs::create_dir_all(&a.out).map_err(|source| CliError::Io { path: a.out.clone(), source })?;
    let mut outputs: BTreeMap<String, String> = BTreeMap::new();
    let mut emit = |name: String, contents: String| -> Result<()> {
        outputs.insert(name.clone(), sha256_hex(contents.as_bytes()));
        write(&a.out.join(name), &contents)
    };
    for (n, s) in chain.stages().iter().enumerate() {
        emit(stage_file(n), to_json(s))?;
        if a.dot && class != StructureClass::Metric {
            emit(format!("stage_{n}.dot"), to_dot(s)?)?;
        }
    }
    for (n, c) in chain.catalogs().iter().enumerate() {
        emit(format!("catalog_{n}.json"), pretty(c)?)?;
    }
    let sizes: Vec<usize> = chain.stages().iter().map(|s| s.len()).collect();
    let catalog_sizes: Vec<usize> = chain.catalogs().iter().map(|c| c.len()).collect();
    let manifest = json!({
        "tool": "forge",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "build",
        "parameters": {
            "class": class,
            "root": a.root,
            "stages": a.stages,
            "max_base": params.max_base_size,
            "grid": params.metric_distance_grid.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "ceiling": ceiling,
        },
        "inputs": { "root": root_hash },
        "outputs": outputs,
        "outcome": { "stage_sizes": sizes, "catalog_sizes": catalog_sizes },
    });
    let text = pretty(&manifest)?;
    write(&a.out.join(MANIFEST), &text)?;
    let summary = sizes
        .iter()
        .enumerate()
        .map(|(n, s)| format!("stage {n}: {s} elements"))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(RunOutput {
        stdout: text,
        summary,
        passed: true,
        skipped: false,
    })
}

/// A chain read from a `build` directory, and a report on whether the files
/// still match the hashes in its manifest.
pub fn load_chain(dir: &Path) -> Result<(StageChain, SuiteReport)> {
    let manifest: Value = serde_json::from_str(&read(&dir.join(MANIFEST))?)?;
    let p = &manifest["parameters"];
    let k = p["stages"]
        .as_u64()
        .ok_or_else(|| CliError::Usage(format!("{} has no stage count", dir.join(MANIFEST).display())))? as usize;
    let max_base = p["max_base"].as_u64().unwrap_or(2) as usize;
    let grid = p["grid"]
        .as_array()
        .map(|g| g.iter().filter_map(|v| v.as_str()).map(str::parse).collect::<std::result::Result<Vec<Rational>, _>>())
        .transpose()?
        .unwrap_or_default();
    let mut hashes = SuiteReport {
        suite: "manifest-hashes".into(),
        ..Default::default()
    };
    let mut stages = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let name = stage_file(n);
        let text = read(&dir.join(&name))?;
        hashes.checked += 1;
        if manifest["outputs"][&name].as_str() == Some(sha256_hex(text.as_bytes()).as_str()) {
            hashes.passed += 1;
        } else {
            hashes.failures.push(format!("{name} does not match its manifest hash"));
        }
        stages.push(Arc::new(from_json(&text)?));
    }
    Ok((StageChain::from_stages(stages, CatalogParams::with_grid(max_base, grid))?, hashes))
}

fn chain_from(a: &VerifyArgs) -> Result<(StageChain, Vec<SuiteReport>)> {
    match (&a.chain, &a.root) {
        (Some(dir), _) => {
            let (chain, hashes) = load_chain(dir)?;
            Ok((chain, vec![hashes]))
        }
        (None, Some(spec)) => {
            let (root, _) = load_root(spec, a.class)?;
            let params = a.catalog.params(root.class(), &[1, 2]);
            Ok((build_stages_within(root, a.stages, &params, a.catalog.ceiling()?)?, Vec::new()))
        }
        (None, None) => Err(CliError::Usage(format!("suite {:?} needs --chain or --root", a.suite))),
    }
}

fn required_class(a: &VerifyArgs) -> Result<StructureClass> {
    a.class
        .ok_or_else(|| CliError::Usage(format!("suite {:?} needs --class", a.suite)))
}

fn cmd_verify(a: &VerifyArgs) -> Result<RunOutput> {
    let ceiling = a.catalog.ceiling()?;
    let reports: Vec<SuiteReport> = match a.suite {
        Suite::Axioms => {
            let (chain, mut reports) = chain_from(a)?;
            reports.push(suites::axioms_suite(&chain)?);
            reports
        }
        Suite::Homogeneity => {
            let (chain, mut reports) = chain_from(a)?;
            reports.push(suites::homogeneity_suite(&chain)?);
            reports
        }
        Suite::ExtensionProperty => {
            let (chain, mut reports) = chain_from(a)?;
            reports.push(suites::extension_property_suite(&chain)?);
            reports
        }
        Suite::PushoutOracle => {
            let class = required_class(a)?;
            let grid = a.catalog.params(class, &[1, 2, 3]).metric_distance_grid;
            let size = a.max_size.unwrap_or(3);
            vec![
                suites::pushout_oracle_suite(class, size, a.object_size, &grid)?,
                suites::amalgam_legs_suite(class, size, &grid)?,
            ]
        }
        Suite::Functoriality => {
            let spec = a
                .root
                .as_deref()
                .ok_or_else(|| CliError::Usage("suite functoriality needs --root".into()))?;
            let (root, _) = load_root(spec, a.class)?;
            let params = a.catalog.params(root.class(), &[1, 2]);
            suites::functoriality_suite(root, &params, ceiling)?
        }
        Suite::Cayley => {
            let classes = match a.class {
                Some(c) => vec![c],
                None => StructureClass::ALL.to_vec(),
            };
            classes
                .into_iter()
                .map(|c| suites::cayley_suite(CayleyRoot::for_class(c), &a.catalog.params(c, &[1, 2]), ceiling))
                .collect::<forge_core::Result<_>>()?
        }
        Suite::CongruenceExtension => vec![suites::congruence_extension_suite(a.max_size.unwrap_or(4))?],
        Suite::FreeSum => {
            let class = required_class(a)?;
            let grid = a.catalog.params(class, &[1, 2]).metric_distance_grid;
            vec![suites::free_sum_coherence_suite(class, a.max_size.unwrap_or(2), a.pairs, &grid)?]
        }
    };
    let passed = reports.iter().all(SuiteReport::passed);
    let skipped = reports.iter().any(SuiteReport::has_skips);
    let doc = json!({
        "tool": "forge",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "verify",
        "suite": a.suite,
        "passed": passed,
        "skipped": skipped,
        "reports": reports,
    });
    let text = pretty(&doc)?;
    if let Some(out) = &a.out {
        write(out, &text)?;
    }
    let summary = reports
        .iter()
        .map(|r| {
            let verdict = if r.passed() { "pass" } else { "FAIL" };
            format!("{}: {verdict} ({}/{} checks, {} skipped)", r.suite, r.passed, r.checked, r.skipped)
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(RunOutput {
        stdout: text,
        summary,
        passed,
        skipped,
    })
}

fn cmd_lift(a: &LiftArgs) -> Result<RunOutput> {
    let (root, root_hash) = load_root(&a.root, None)?;
    let params = a.catalog.params(root.class(), &[1, 2]);
    let phi = Morphism::new(root.clone(), root.clone(), a.map.clone())?;
    if !phi.kind().is_hom() {
        return Err(CliError::Usage(format!("--map {:?} is not an endomorphism of the root", a.map)));
    }
    let catalog = enumerate_extensions(root, &params)?;
    let entries = catalog.len();
    let star = Star::new(catalog, a.catalog.ceiling()?)?;
    let lifted = lift(&phi, &star)?;
    let doc = json!({
        "tool": "forge",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "lift",
        "inputs": { "root": root_hash },
        "catalog_size": entries,
        "star_size": star.sum().map(|s| s.object().len()),
        "lift": lifted,
    });
    Ok(RunOutput {
        stdout: pretty(&doc)?,
        summary: format!("lifted over {entries} catalog entries"),
        passed: true,
        skipped: false,
    })
}

fn cmd_export(a: &ExportArgs) -> Result<RunOutput> {
    let s = from_json(&read(&a.stage)?)?;
    let text = match a.format {
        Format::Json => to_json(&s),
        Format::Dot => to_dot(&s)?,
    };
    if let Some(out) = &a.out {
        write(out, &text)?;
    }
    Ok(RunOutput {
        stdout: text,
        summary: format!("{} with {} elements", s.class(), s.len()),
        passed: true,
        skipped: false,
    })
}

/// Whether `--allow-skips` was given, for the exit code.
pub fn allows_skips(cli: &Cli) -> bool {
    matches!(&cli.command, Command::Verify(v) if v.allow_skips)
}
