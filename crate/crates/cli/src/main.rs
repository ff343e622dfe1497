//! Batch front door for the bredon library.
//!
//! Subcommands: `homology` (reduced equivariant homology of a space),
//! `check-coefficients` (functoriality report), `orbit-category` (dump),
//! `transfer-check` (transfer axiom report for a covering read from a file),
//! and `oracles` (cross-checks against an independent nonequivariant
//! implementation). Groups, spaces, and coefficients are given either as
//! `builtin:<name>` or as a path to a JSON file in the schema of the owning
//! module. Exit codes: 0 success, 1 validation failure (stderr carries the
//! first witness), 2 usage error (stderr carries the grammar).

use std::fmt;
use std::fs;
use std::process;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use bredon::coeff::{builtin_mackey, CoeffSpec, CoefficientSystem, BUILTIN_COEFF_NAMES};
use bredon::group::{max_order, Group, GroupSpec};
use bredon::homology::reduced_homology;
use bredon::oracle;
use bredon::orbit::OrbitCategory;
use bredon::ring::Ring;
use bredon::simplicial::{
    builtin_space, orbit_quotient, SimplicialGSet, SimplicialSpec, BUILTIN_SPACE_NAMES,
};
use bredon::transfer::{check_axioms, random_map_into, CoveringSpec, GCovering, GMap};

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(
    name = "bredon",
    version,
    about = "Exact Bredon homology of finite simplicial G-sets",
    after_help = grammar()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced equivariant homology of a space.
    Homology {
        /// Space: JSON file or builtin:<name>.
        #[arg(long)]
        space: String,
        /// Group: JSON file or builtin:<name>.
        #[arg(long)]
        group: String,
        /// Coefficients: JSON file or builtin:<name>.
        #[arg(long)]
        coeffs: String,
        /// Ground ring: Z, Q, or Fp:<p>.
        #[arg(long)]
        ring: Option<String>,
        /// Highest degree to report.
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Validate a coefficient system and print its functoriality report.
    CheckCoefficients {
        /// Group: JSON file or builtin:<name>.
        #[arg(long)]
        group: String,
        /// Coefficients: JSON file or builtin:<name>.
        #[arg(long)]
        coeffs: String,
        /// Ground ring: Z, Q, or Fp:<p>.
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dump the orbit category of a group.
    OrbitCategory {
        /// Group: JSON file or builtin:<name>.
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the transfer axioms for a covering read from a file.
    TransferCheck {
        /// Covering: JSON file with total/base action tables and projection.
        #[arg(long)]
        covering: String,
        /// Group: JSON file or builtin:<name>.
        #[arg(long)]
        group: String,
        /// Mackey-functor coefficients: builtin:<name>.
        #[arg(long)]
        coeffs: String,
        /// Ground ring: Z, Q, or Fp:<p>.
        #[arg(long)]
        ring: Option<String>,
        /// Seed for the randomized test maps.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cross-check a space against an independent ordinary-homology oracle.
    Oracles {
        /// Space: JSON file or builtin:<name>.
        #[arg(long)]
        space: String,
        /// Group: JSON file or builtin:<name>.
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn grammar() -> String {
    format!(
        "\
sources: a JSON file path, or builtin:<name>
  groups:       trivial, Z<n>, S3, V4, D<n>
  spaces:       {}
  coefficients: {}
rings: Z, Q, Fp:<p> (p prime); default Z
env: BREDON_MAX_GROUP_ORDER overrides the group-order cap",
        BUILTIN_SPACE_NAMES.join(", "),
        BUILTIN_COEFF_NAMES.join(", ")
    )
}

/// A bad flag value: reported with the grammar and exit code 2, unlike
/// validation failures, which exit 1 with a witness.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() {
    // die quietly when the reader of a pipe goes away (`bredon ... | head`)
    // instead of panicking on the closed descriptor
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        if let Some(usage) = err.downcast_ref::<UsageError>() {
            eprintln!("usage error: {usage}");
            eprintln!("{}", grammar());
            process::exit(2);
        }
        eprintln!("error: {err:#}");
        process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Homology { space, group, coeffs, ring, max_degree, format } => {
            homology_command(&space, &group, &coeffs, ring.as_deref(), max_degree, format)
        }
        Command::CheckCoefficients { group, coeffs, ring, format } => {
            check_coefficients_command(&group, &coeffs, ring.as_deref(), format)
        }
        Command::OrbitCategory { group, format } => orbit_category_command(&group, format),
        Command::TransferCheck { covering, group, coeffs, ring, seed, format } => {
            transfer_check_command(&covering, &group, &coeffs, ring.as_deref(), seed, format)
        }
        Command::Oracles { space, group, format } => oracles_command(&space, &group, format),
    }
}

fn builtin(src: &str) -> Option<&str> {
    src.strip_prefix("builtin:")
}

fn builtin_group(name: &str) -> Result<Group> {
    let parametrized = |order: usize| -> Result<()> {
        let cap = max_order();
        if order == 0 {
            bail!("a group needs at least the identity element");
        }
        if order > cap {
            bail!("group order {order} exceeds the cap {cap} (set BREDON_MAX_GROUP_ORDER to raise)");
        }
        Ok(())
    };
    match name {
        "trivial" => Ok(Group::trivial()),
        "S3" => Ok(Group::symmetric_3()),
        "V4" => Ok(Group::klein_four()),
        _ => {
            if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
                parametrized(n)?;
                return Ok(Group::cyclic(n));
            }
            if let Some(n) = name.strip_prefix('D').and_then(|s| s.parse::<usize>().ok()) {
                parametrized(2 * n.max(1))?;
                if n == 0 {
                    bail!("the dihedral family starts at D1");
                }
                return Ok(Group::dihedral(n));
            }
            bail!("unknown builtin group {name:?} (try trivial, Z<n>, S3, V4, or D<n>)")
        }
    }
}

fn load_group(src: &str) -> Result<Arc<Group>> {
    let group = match builtin(src) {
        Some(name) => builtin_group(name)?,
        None => {
            let text =
                fs::read_to_string(src).with_context(|| format!("reading group file {src}"))?;
            let spec: GroupSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing group file {src}"))?;
            Group::from_spec(&spec).with_context(|| format!("validating group file {src}"))?
        }
    };
    Ok(Arc::new(group))
}

fn load_space(src: &str, group: &Arc<Group>) -> Result<SimplicialGSet> {
    match builtin(src) {
        Some(name) => Ok(builtin_space(name, group)?),
        None => {
            let text =
                fs::read_to_string(src).with_context(|| format!("reading space file {src}"))?;
            let spec: SimplicialSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing space file {src}"))?;
            SimplicialGSet::from_spec(group.clone(), &spec)
                .with_context(|| format!("validating space file {src}"))
        }
    }
}

enum Coefficients {
    Mackey(bredon::MackeyFunctor),
    System(CoefficientSystem),
}

impl Coefficients {
    fn system(&self) -> &CoefficientSystem {
        match self {
            Coefficients::Mackey(m) => m.covariant(),
            Coefficients::System(s) => s,
        }
    }

    fn ring(&self) -> Ring {
        self.system().ring()
    }
}

fn parse_ring(flag: Option<&str>) -> Result<Option<Ring>> {
    match flag {
        None => Ok(None),
        Some(text) => Ok(Some(
            Ring::parse(text).map_err(|e| UsageError(format!("--ring {text}: {e}")))?,
        )),
    }
}

fn load_coeffs(src: &str, orbit: &Arc<OrbitCategory>, ring: Option<&str>) -> Result<Coefficients> {
    let flag = parse_ring(ring)?;
    match builtin(src) {
        Some(name) => {
            let ring = flag.unwrap_or(Ring::Integers);
            Ok(Coefficients::Mackey(builtin_mackey(name, orbit.clone(), ring)?))
        }
        None => {
            let text = fs::read_to_string(src)
                .with_context(|| format!("reading coefficient file {src}"))?;
            let spec: CoeffSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing coefficient file {src}"))?;
            if let Some(r) = flag {
                if r != spec.ring {
                    bail!("--ring {r} conflicts with the coefficient file's ring {}", spec.ring);
                }
            }
            let system = CoefficientSystem::from_spec(orbit.clone(), &spec)
                .with_context(|| format!("validating coefficient file {src}"))?;
            Ok(Coefficients::System(system))
        }
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn homology_command(
    space_src: &str,
    group_src: &str,
    coeffs_src: &str,
    ring: Option<&str>,
    max_degree: Option<usize>,
    format: Format,
) -> Result<()> {
    let group = load_group(group_src)?;
    let space = load_space(space_src, &group)?;
    let orbit = Arc::new(OrbitCategory::new(group));
    let coeffs = load_coeffs(coeffs_src, &orbit, ring)?;
    let result = reduced_homology(&space, coeffs.system())?;
    match format {
        Format::Text => {
            println!(
                "reduced homology of {space_src} with {coeffs_src} coefficients over {}",
                coeffs.ring()
            );
            let rendered = result.to_string();
            let mut lines = rendered.lines();
            let limit = max_degree.unwrap_or_else(|| result.groups().len().saturating_sub(1));
            for q in 0..=limit {
                match lines.next() {
                    Some(line) => println!("{line}"),
                    None => println!("H_{q} = 0"),
                }
            }
        }
        Format::Json => {
            let mut value = result.to_json();
            if let (Some(d), Some(h)) = (max_degree, value.get_mut("H")) {
                if let Some(entries) = h.as_array_mut() {
                    entries.retain(|e| e["q"].as_u64().is_some_and(|q| q as usize <= d));
                    for q in entries.len()..=d {
                        entries.push(json!({"q": q, "betti": 0, "torsion": []}));
                    }
                }
            }
            print_json(&value)?;
        }
    }
    Ok(())
}

fn check_coefficients_command(
    group_src: &str,
    coeffs_src: &str,
    ring: Option<&str>,
    format: Format,
) -> Result<()> {
    let group = load_group(group_src)?;
    let orbit = Arc::new(OrbitCategory::new(group.clone()));
    let coeffs = load_coeffs(coeffs_src, &orbit, ring)?;
    let (report, homological) = match &coeffs {
        Coefficients::Mackey(m) => (m.validate(), Some(m.is_homological())),
        Coefficients::System(s) => (s.validate(), None),
    };
    let ranks: Vec<(usize, usize, usize)> = orbit
        .subgroups()
        .iter()
        .enumerate()
        .map(|(i, h)| (i, h.len(), coeffs.system().rank(bredon::SubgroupId(i))))
        .collect();
    match format {
        Format::Text => {
            println!("coefficients {coeffs_src} over {} for group {group_src}", coeffs.ring());
            for (i, order, rank) in &ranks {
                println!("  rank at G/H{i} (subgroup order {order}): {rank}");
            }
            println!("functoriality: {report}");
            if let Some(h) = homological {
                println!("homological: {}", if h { "yes" } else { "no" });
            }
        }
        Format::Json => {
            let value = json!({
                "source": coeffs_src,
                "ring": coeffs.ring().to_string(),
                "group_order": group.order(),
                "objects": ranks
                    .iter()
                    .map(|(i, order, rank)| json!({
                        "object": i,
                        "subgroup_order": order,
                        "rank": rank,
                    }))
                    .collect::<Vec<_>>(),
                "valid": report.is_valid(),
                "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "homological": homological,
            });
            print_json(&value)?;
        }
    }
    if let Some(first) = report.violations.first() {
        bail!("coefficient functoriality failure: {first}");
    }
    Ok(())
}

fn orbit_category_command(group_src: &str, format: Format) -> Result<()> {
    let group = load_group(group_src)?;
    let orbit = OrbitCategory::new(group.clone());
    let morphisms = orbit.all_morphisms();
    match format {
        Format::Text => {
            println!("orbit category of {group_src} (group order {})", group.order());
            println!("objects: {}", orbit.subgroup_count());
            for (i, h) in orbit.subgroups().iter().enumerate() {
                let elements: Vec<String> =
                    h.elements().iter().map(usize::to_string).collect();
                println!(
                    "  G/H{i}: subgroup order {}, elements {{{}}}",
                    h.len(),
                    elements.join(", ")
                );
            }
            println!("morphisms: {}", morphisms.len());
            for source in 0..orbit.subgroup_count() {
                for target in 0..orbit.subgroup_count() {
                    let count = morphisms
                        .iter()
                        .filter(|m| {
                            m.source().index() == source && m.target().index() == target
                        })
                        .count();
                    if count > 0 {
                        println!("  hom(G/H{source}, G/H{target}): {count}");
                    }
                }
            }
        }
        Format::Json => {
            let value = json!({
                "group_order": group.order(),
                "object_count": orbit.subgroup_count(),
                "objects": orbit
                    .subgroups()
                    .iter()
                    .enumerate()
                    .map(|(i, h)| json!({
                        "object": i,
                        "subgroup_order": h.len(),
                        "elements": h.elements(),
                    }))
                    .collect::<Vec<_>>(),
                "morphism_count": morphisms.len(),
                "morphisms": morphisms
                    .iter()
                    .map(|m| json!({
                        "source": m.source().index(),
                        "target": m.target().index(),
                        "rep": m.rep(),
                    }))
                    .collect::<Vec<_>>(),
            });
            print_json(&value)?;
        }
    }
    Ok(())
}

fn transfer_check_command(
    covering_src: &str,
    group_src: &str,
    coeffs_src: &str,
    ring: Option<&str>,
    seed: u64,
    format: Format,
) -> Result<()> {
    let group = load_group(group_src)?;
    let orbit = Arc::new(OrbitCategory::new(group.clone()));
    let mackey = match load_coeffs(coeffs_src, &orbit, ring)? {
        Coefficients::Mackey(m) => m,
        Coefficients::System(_) => {
            return Err(UsageError(
                "transfer checks need a Mackey functor; pass --coeffs builtin:<name>".into(),
            )
            .into())
        }
    };
    let text = fs::read_to_string(covering_src)
        .with_context(|| format!("reading covering file {covering_src}"))?;
    let spec: CoveringSpec = serde_json::from_str(&text)
        .with_context(|| format!("parsing covering file {covering_src}"))?;
    let p = GCovering::from_spec(group, &spec)
        .with_context(|| format!("validating covering file {covering_src}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maps: Vec<GMap> = (0..3).map(|_| random_map_into(p.base(), &mut rng)).collect();
    let coverings = vec![GCovering::identity(p.total()), p];
    let report = check_axioms(&coverings, &maps, &mackey)?;

    match format {
        Format::Text => {
            println!(
                "transfer axiom report for {covering_src} with {coeffs_src} over {} (seed {seed})",
                mackey.ring()
            );
            print!("{report}");
        }
        Format::Json => {
            let value = json!({
                "covering": covering_src,
                "ring": mackey.ring().to_string(),
                "seed": seed,
                "all_passed": report.all_passed(),
                "checks": report
                    .checks
                    .iter()
                    .map(|c| json!({
                        "axiom": c.axiom.to_string(),
                        "description": c.description,
                        "passed": c.passed,
                        "witness": c.witness,
                    }))
                    .collect::<Vec<_>>(),
            });
            print_json(&value)?;
        }
    }
    if let Some(first) = report.failures().first() {
        let witness = first.witness.as_deref().unwrap_or("no witness recorded");
        bail!("transfer axiom failure — {}: {} ({witness})", first.axiom, first.description);
    }
    Ok(())
}

fn oracles_command(space_src: &str, group_src: &str, format: Format) -> Result<()> {
    let group = load_group(group_src)?;
    let space = load_space(space_src, &group)?;
    let orbit = Arc::new(OrbitCategory::new(group));
    let constant = builtin_mackey("constant", orbit.clone(), Ring::Integers)?;
    let linearization = builtin_mackey("linearization", orbit.clone(), Ring::Integers)?;

    let checks = [
        (
            "constant-vs-orbit-space",
            "constant coefficients match the orbit-space homology",
            reduced_homology(&space, constant.covariant())?,
            oracle::reduced_integral_homology(&orbit_quotient(&space)),
        ),
        (
            "linearization-vs-underlying",
            "linearization coefficients match the underlying-space homology",
            reduced_homology(&space, linearization.covariant())?,
            oracle::reduced_integral_homology(&space),
        ),
    ];

    let mut first_witness = None;
    let mut entries = Vec::new();
    for (name, description, bredon, ordinary) in &checks {
        let passed = oracle::agrees(bredon, ordinary);
        if !passed && first_witness.is_none() {
            let len = bredon.groups().len().max(ordinary.len());
            for q in 0..len {
                let g = bredon.group(q);
                let (betti, torsion) =
                    ordinary.get(q).map(|(b, t)| (*b, t.clone())).unwrap_or_default();
                if g.betti != betti || g.torsion != torsion {
                    first_witness = Some(format!(
                        "{description}: at degree {q} computed betti {} torsion {:?}, \
                         oracle betti {betti} torsion {torsion:?}",
                        g.betti, g.torsion
                    ));
                    break;
                }
            }
        }
        entries.push((name, description, passed, bredon, ordinary));
    }

    match format {
        Format::Text => {
            println!("oracle cross-checks for {space_src} over {group_src}");
            for (_, description, passed, bredon, _) in &entries {
                println!("[{}] {description}", if *passed { "PASS" } else { "FAIL" });
                for line in bredon.to_string().lines() {
                    println!("    {line}");
                }
            }
        }
        Format::Json => {
            let value = json!({
                "space": space_src,
                "all_passed": entries.iter().all(|e| e.2),
                "checks": entries
                    .iter()
                    .map(|(name, description, passed, bredon, ordinary)| json!({
                        "name": name,
                        "description": description,
                        "passed": passed,
                        "bredon": bredon.to_json(),
                        "ordinary": ordinary
                            .iter()
                            .enumerate()
                            .map(|(q, (betti, torsion))| json!({
                                "q": q,
                                "betti": betti,
                                "torsion": torsion
                                    .iter()
                                    .map(ToString::to_string)
                                    .collect::<Vec<_>>(),
                            }))
                            .collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
            });
            print_json(&value)?;
        }
    }
    if let Some(witness) = first_witness {
        bail!("oracle mismatch — {witness}");
    }
    Ok(())
}
