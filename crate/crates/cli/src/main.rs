use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use hall_forge::certificate::{self, Certificate, Inputs};
use hall_forge::format::{
    automorphism_from_lines, embeddings_from_spec, equivariant_embeddings_from_spec, hom_from_lines, load_group,
    parse_amalgam_spec, parse_map_lines, parse_partial_iso, partial_iso_from_spec, subgroup_from_words,
};
use hall_forge::{
    amalgamate, catalog, catalog_names, commuting_extension, equivariant_amalgamate, generic_power_tower, hall_tower,
    hrushovski_extend, root_extension, stage_conjugacy_check, Bounds, EquivariantSystem, GroupHom, NamedGroup,
    TableGroup, MAX_HALL_DEPTH,
};

/// Degree cap used by `tower --kind power` unless `--degree-cap` is given.
const POWER_TOWER_DEGREE_CAP: usize = 20_000;
/// Largest stage on which every subgroup pair can be checked for conjugacy.
const CONJUGACY_STAGE_ORDER: u32 = 64;

#[derive(Parser)]
#[command(name = "hall-forge", version, about = "Finite-group constructions with verifiable certificates")]
struct Cli {
    /// Largest permutation degree a construction may use.
    #[arg(long, global = true)]
    degree_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extend partial isomorphisms of a group to conjugations in a larger one.
    Extend {
        /// Group file or `catalog:<name>`.
        #[arg(long)]
        group: String,
        /// Partial-isomorphism file (repeatable).
        #[arg(long = "iso")]
        isos: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Amalgamate two embeddings of a common subgroup.
    Amalgamate {
        #[arg(long)]
        spec: PathBuf,
        /// Carry the systems' distinguished automorphisms through the amalgam.
        #[arg(long)]
        equivariant: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize two commuting automorphisms by commuting elements.
    Commute {
        #[command(flatten)]
        args: PairArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend an automorphism to one whose n-th power extends another.
    Root {
        #[command(flatten)]
        args: PairArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a tower of groups.
    Tower {
        #[arg(long, value_enum)]
        kind: TowerKind,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Root exponent for the power tower.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "catalog:C3")]
        seed: String,
        /// Seed automorphism for the power tower, as map lines.
        #[arg(long)]
        alpha: Option<String>,
        /// Hall stage whose subgroup pairs are checked for conjugacy.
        #[arg(long)]
        conj_stage: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check every equation of a certificate.
    Verify { file: PathBuf },
    /// List the built-in groups, or print one in group-file format.
    Catalog { name: Option<String> },
}

#[derive(clap::Args)]
struct PairArgs {
    /// Ambient group B: group file or `catalog:<name>`.
    #[arg(long)]
    group: String,
    /// Comma-separated generator words of A ≤ B; defaults to B.
    #[arg(long)]
    subgroup: Option<String>,
    /// Automorphism of A as map lines; unmentioned generators are fixed.
    #[arg(long, default_value = "")]
    alpha: String,
    /// Automorphism of B as map lines; unmentioned generators are fixed.
    #[arg(long, default_value = "")]
    beta: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum TowerKind {
    Hall,
    Power,
}

enum Failure {
    Construction(String),
    Verification(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Construction(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Usage(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Construction(m) | Failure::Verification(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<hall_forge::Error> for Failure {
    fn from(e: hall_forge::Error) -> Self {
        Failure::Construction(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let info = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return ExitCode::from(if info { 0 } else { 3 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let mut bounds = Bounds::from_env().map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(cap) = cli.degree_cap {
        bounds = bounds.with_degree_cap(cap);
    }
    match cli.command {
        Command::Extend { group, isos, out } => extend(&group, &isos, out.as_deref(), &bounds),
        Command::Amalgamate { spec, equivariant, out } => amalgam(&spec, equivariant, out.as_deref(), &bounds),
        Command::Commute { args, out } => pair(&args, None, out.as_deref(), &bounds),
        Command::Root { args, n, out } => pair(&args, Some(n), out.as_deref(), &bounds),
        Command::Tower {
            kind: TowerKind::Hall,
            depth,
            seed,
            conj_stage,
            out,
            ..
        } => hall(depth, &seed, conj_stage, out.as_deref(), &bounds),
        Command::Tower {
            kind: TowerKind::Power,
            depth,
            n,
            seed,
            alpha,
            out,
            ..
        } => {
            if cli.degree_cap.is_none() {
                bounds = bounds.with_degree_cap(POWER_TOWER_DEGREE_CAP);
            }
            power(n, depth, &seed, alpha.as_deref(), out.as_deref(), &bounds)
        }
        Command::Verify { file } => verify(&file),
        Command::Catalog { name } => list_catalog(name.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Construction(format!("cannot read {}: {e}", path.display())))
}

fn group_text(spec: &str) -> Result<String, Failure> {
    if spec.starts_with("catalog:") {
        Ok(spec.to_string())
    } else {
        read(Path::new(spec))
    }
}

fn table(g: &NamedGroup, bounds: &Bounds) -> Result<Arc<TableGroup>, Failure> {
    Ok(g.table(bounds.enumeration)?)
}

/// Verifies the emitted text and writes it out.
fn deliver(cert: Certificate, out: Option<&Path>) -> Outcome {
    let text = cert.emit();
    let report = certificate::verify_certificate(&text).map_err(|e| Failure::Verification(e.to_string()))?;
    if !report.passed() {
        eprint!("{report}");
        return Err(Failure::Verification(format!(
            "the {} certificate failed verification",
            cert.kind
        )));
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let checked: usize = report.families.iter().map(|f| f.checked).sum();
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::Construction(format!("cannot write {}: {e}", path.display())))?;
            eprintln!(
                "{} certificate verified ({} families, {checked} checks) and written to {}",
                cert.kind,
                report.families.len(),
                path.display()
            );
        }
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
    }
    Ok(())
}

fn extend(group: &str, isos: &[PathBuf], out: Option<&Path>, bounds: &Bounds) -> Outcome {
    let g = load_group(group)?;
    let t = table(&g, bounds)?;
    let mut inputs = Inputs::from([("group".to_string(), group_text(group)?)]);
    let mut psis = Vec::new();
    for (i, path) in isos.iter().enumerate() {
        let text = read(path)?;
        let spec = parse_partial_iso(&text)?;
        psis.push(partial_iso_from_spec(&g, &t, &spec, bounds.enumeration)?);
        inputs.insert(format!("iso{}", i + 1), text);
    }
    let ext = hrushovski_extend(&t, &psis, bounds)?;
    eprintln!("extension of {} acts on {} points", g.name, ext.ambient.degree());
    deliver(certificate::extension_certificate(&ext, inputs, bounds), out)
}

fn amalgam(spec_path: &Path, equivariant: bool, out: Option<&Path>, bounds: &Bounds) -> Outcome {
    let text = read(spec_path)?;
    let spec = parse_amalgam_spec(&text, spec_path.parent())?;
    let (f, g) = embeddings_from_spec(&spec, bounds.enumeration)?;
    for (name, h, target) in [("f", &f, "B"), ("g", &g, "C")] {
        if !h.is_injective() {
            return Err(Failure::Construction(format!(
                "precondition failed: embedding {name}: A -> {target} is not injective"
            )));
        }
    }
    let inputs = Inputs::from([("spec".to_string(), text)]);
    let cert = if equivariant {
        let (f, g) = equivariant_embeddings_from_spec(&spec, bounds.enumeration)?;
        let am = equivariant_amalgamate(&f, &g, bounds)?;
        certificate::equivariant_certificate(&am, inputs, bounds)
    } else {
        let am = amalgamate(&f, &g, bounds)?;
        eprintln!("amalgam acts on {} points", am.degree());
        certificate::amalgam_certificate(&am, inputs, bounds)
    };
    deliver(cert, out)
}

fn pair(args: &PairArgs, n: Option<usize>, out: Option<&Path>, bounds: &Bounds) -> Outcome {
    let b = load_group(&args.group)?;
    let tb = table(&b, bounds)?;
    let words: Vec<String> = match &args.subgroup {
        Some(s) => s.split(',').map(|w| w.trim().to_string()).filter(|w| !w.is_empty()).collect(),
        None => b.gen_names.clone(),
    };
    let a = subgroup_from_words(&b, &tb, &words, bounds.enumeration)?;
    let alpha = automorphism_from_lines(&b, &tb, &a, &parse_map_lines(&args.alpha)?)?;
    let beta = hom_from_lines(&b, &tb, &b, &tb, &parse_map_lines(&args.beta)?, true)?;
    if !beta.is_automorphism() {
        return Err(Failure::Construction("precondition failed: beta is not an automorphism of B".into()));
    }
    let mut inputs: Inputs = BTreeMap::from([
        ("group".to_string(), group_text(&args.group)?),
        ("subgroup".to_string(), words.join(",")),
        ("alpha".to_string(), args.alpha.clone()),
        ("beta".to_string(), args.beta.clone()),
    ]);
    let cert = match n {
        None => {
            let c = commuting_extension(&tb, &a, &alpha, &beta, bounds)?;
            certificate::commuting_certificate(&c, inputs, bounds)
        }
        Some(n) => {
            inputs.insert("n".into(), n.to_string());
            let r = root_extension(&tb, &a, &alpha, &beta, n, bounds)?;
            eprintln!("root extension acts on {} points ({})", r.degree(), r.realization);
            certificate::root_certificate(&r, inputs, bounds)
        }
    };
    deliver(cert, out)
}

fn hall(depth: usize, seed: &str, conj_stage: Option<usize>, out: Option<&Path>, bounds: &Bounds) -> Outcome {
    if depth > MAX_HALL_DEPTH {
        return Err(Failure::Usage(format!("hall tower depth is at most {MAX_HALL_DEPTH}")));
    }
    let tower = hall_tower(depth, &load_group(seed)?, bounds)?;
    let orders = tower.orders();
    eprintln!("degrees {:?}", tower.degrees());
    for (k, o) in orders.iter().enumerate() {
        let digits = o.to_string();
        if digits.len() <= 24 {
            eprintln!("|H{k}| = {digits}");
        } else {
            eprintln!("|H{k}| has {} digits", digits.len());
        }
    }
    let stage = conj_stage.or_else(|| {
        (0..depth)
            .rev()
            .find(|&k| orders[k] <= CONJUGACY_STAGE_ORDER.into())
    });
    let report = match stage {
        Some(k) if k < depth => Some(stage_conjugacy_check(&tower, k, None)?),
        Some(k) => return Err(Failure::Usage(format!("conjugacy stage {k} needs a tower deeper than {depth}"))),
        None => None,
    };
    if let Some(r) = &report {
        eprintln!(
            "stage {}: {} isomorphic subgroup pairs conjugated in the next stage",
            r.stage,
            r.isomorphic_pairs()
        );
    }
    let inputs = Inputs::from([
        ("kind".to_string(), "hall".to_string()),
        ("depth".to_string(), depth.to_string()),
        ("seed".to_string(), group_text(seed)?),
    ]);
    deliver(certificate::hall_certificate(&tower, report.as_ref(), inputs, bounds), out)
}

fn power(n: usize, depth: usize, seed: &str, alpha: Option<&str>, out: Option<&Path>, bounds: &Bounds) -> Outcome {
    let g = load_group(seed)?;
    let t = table(&g, bounds)?;
    let alpha_text = alpha.unwrap_or("");
    let auto: GroupHom = hom_from_lines(&g, &t, &g, &t, &parse_map_lines(alpha_text)?, true)?;
    if !auto.is_automorphism() {
        return Err(Failure::Construction("precondition failed: alpha is not an automorphism of the seed".into()));
    }
    let system = EquivariantSystem::new(&t, vec![auto])?;
    let tower = generic_power_tower(n, depth, &system, bounds)?;
    for (i, s) in tower.stages.iter().enumerate() {
        eprintln!("stage {i}: |A| = {}, degree {}", s.a.order(), s.a.degree());
    }
    let inputs = Inputs::from([
        ("kind".to_string(), "power".to_string()),
        ("n".to_string(), n.to_string()),
        ("depth".to_string(), depth.to_string()),
        ("seed".to_string(), group_text(seed)?),
        ("alpha".to_string(), alpha_text.to_string()),
    ]);
    deliver(certificate::power_certificate(&tower, inputs, bounds), out)
}

fn verify(path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Verification(format!("cannot read {}: {e}", path.display())))?;
    let report = certificate::verify_certificate(&text).map_err(|e| Failure::Verification(e.to_string()))?;
    eprint!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} violated equation families", report.violations().count())))
    }
}

fn list_catalog(name: Option<&str>) -> Outcome {
    let text = match name {
        Some(n) => catalog(n)?.to_text(),
        None => catalog_names()
            .iter()
            .map(|n| {
                let g = catalog(n)?;
                Ok(format!("{n}\torder {}\tdegree {}\n", g.perm_group().order(), g.degree))
            })
            .collect::<Result<String, hall_forge::Error>>()?,
    };
    // a closed pipe downstream is not an error
    let _ = std::io::stdout().write_all(text.as_bytes());
    Ok(())
}
