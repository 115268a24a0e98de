use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use twisted_schur::cohomology::{cohomology_group, twisted_multiplier};
use twisted_schur::cyclotomic::heisenberg_demo;
use twisted_schur::io::{self, SCHEMA};
use twisted_schur::repgroups::{twisted_representation_groups, SearchOptions};
use twisted_schur::selftest::run_selftest;
use twisted_schur::semiprojective::{lift_over_extension, regular_semiprojective_rep, verify_lift, LiftOutcome};
use twisted_schur::{Budget, Error, FiniteGroup, Result, SignCharacter};

mod cache;

use cache::Cache;

#[derive(Parser)]
#[command(name = "twisted-schur", version, about = "Twisted Schur multipliers, representation groups and semi-linear lifts")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct RunConfig {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Directory for cached multiplier and cohomology results
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads for the candidate search (default: all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Seed for `selftest`
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output
    #[arg(long, short, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Largest group obtained by closing generators
    #[arg(long, global = true, value_name = "N")]
    max_group_order: Option<usize>,
    /// Largest number of normalized tuples in one cochain degree
    #[arg(long, global = true, value_name = "N")]
    max_tuples: Option<usize>,
    /// Largest matrix group closure
    #[arg(long, global = true, value_name = "N")]
    max_closure_order: Option<usize>,
    /// Largest extension group built by `repgroups`
    #[arg(long, global = true, value_name = "N")]
    max_extension_order: Option<usize>,
}

impl RunConfig {
    fn budget(&self) -> Result<Budget> {
        let mut b = Budget::default();
        let overrides = [
            (&mut b.max_group_order, self.max_group_order),
            (&mut b.max_tuples, self.max_tuples),
            (&mut b.max_closure_order, self.max_closure_order),
            (&mut b.max_extension_order, self.max_extension_order),
        ];
        for (slot, v) in overrides {
            if let Some(v) = v {
                *slot = v;
            }
        }
        b.validate()?;
        Ok(b)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Invariant factors of H²(G, ℂ*_φ)
    Multiplier {
        group: PathBuf,
        /// Signs of φ on the group's generators, e.g. `1,-1` (default: trivial)
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        action: String,
    },
    /// Twisted representation groups of (G, φ) with witness extensions
    Repgroups {
        group: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        action: String,
    },
    /// Hⁿ(G, M) for a sign module or a finite module
    Cohomology {
        group: PathBuf,
        #[arg(long)]
        degree: usize,
        /// `sign`, `trivial`, `finite:<json>` or `finite:@<file>`
        #[arg(long, default_value = "sign")]
        coeff: String,
        /// Action used by `--coeff sign`
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        action: String,
        /// Include a representative cocycle for each invariant factor
        #[arg(long)]
        reps: bool,
    },
    /// Regular φ-representation of a cocycle
    RegularRep {
        group: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        action: String,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Lift a representation over an extension (the group is the extension's base)
    Lift {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        extension: PathBuf,
    },
    /// Semi-linear closure and lattice checks for the Heisenberg group of order 27
    Heisenberg,
    /// Seeded run of the engine's invariant checks
    Selftest,
}

struct Reply {
    value: Value,
    text: String,
    code: u8,
}

impl Reply {
    fn ok(value: Value, text: String) -> Self {
        Reply { value, text, code: 0 }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn load_group(path: &Path, budget: &Budget) -> Result<(FiniteGroup, String)> {
    let g = io::parse_group(&read(path)?, budget)?;
    let canonical = io::group_json(&g).to_string();
    Ok((g, canonical))
}

/// An omitted action is the trivial one.
fn parse_action(g: &FiniteGroup, action: &str) -> Result<SignCharacter> {
    if action.trim().is_empty() {
        Ok(SignCharacter::trivial(g))
    } else {
        io::parse_action(g, action)
    }
}

fn cache_key(parts: &[&str]) -> String {
    let mut all = vec![SCHEMA, env!("CARGO_PKG_VERSION")];
    all.extend_from_slice(parts);
    Cache::key(&all)
}

fn list(xs: &[u64]) -> String {
    format!("[{}]", xs.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))
}

fn u64s(v: &Value) -> Vec<u64> {
    v.as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default()
}

fn tag(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    v
}

fn multiplier(cfg: &RunConfig, cache: &Cache, group: &Path, action: &str) -> Result<Reply> {
    let b = cfg.budget()?;
    let (g, canon) = load_group(group, &b)?;
    let phi = parse_action(&g, action)?;
    let signs = format!("{:?}", phi.on_generators(&g));
    let v = cache.get_or_insert(&cache_key(&["multiplier", &canon, &signs]), || {
        let m = twisted_multiplier(&g, &phi, &b)?;
        Ok(tag(json!({ "invariants": m.invariants(), "order": m.order(), "exponent": m.exponent() })))
    })?;
    let text = format!("{}\n", list(&u64s(&v["invariants"])));
    Ok(Reply::ok(v, text))
}

fn repgroups(cfg: &RunConfig, group: &Path, action: &str) -> Result<Reply> {
    let b = cfg.budget()?;
    let (g, _) = load_group(group, &b)?;
    let phi = parse_action(&g, action)?;
    let opts = SearchOptions { jobs: cfg.jobs.map(|j| j as usize), shuffle_seed: None };
    let r = twisted_representation_groups(&g, &phi, &b, &opts)?;
    let mut text = format!(
        "multiplier {}; {} candidate extensions, {} accepted, {} up to isomorphism\n",
        list(&r.multiplier),
        r.candidates,
        r.accepted,
        r.groups.len()
    );
    for (i, x) in r.groups.iter().enumerate() {
        let f = &x.fingerprint;
        text += &format!(
            "{:>3}  order {:<4} {:<8} exponent {}, center {}, abelianization {}\n",
            i + 1,
            f.order,
            x.identified_as.as_deref().unwrap_or("-"),
            f.exponent,
            f.center_order,
            list(&f.abelian_invariants)
        );
    }
    Ok(Reply::ok(io::repgroups_json(&r), text))
}

fn coefficients(g: &FiniteGroup, action: &str, coeff: &str) -> Result<(twisted_schur::TwistedModule, String)> {
    let phi = parse_action(g, action)?;
    let spec = match coeff.strip_prefix("finite:@") {
        Some(path) => format!("finite:{}", read(Path::new(path))?),
        None => coeff.to_string(),
    };
    let module = io::parse_coefficients(g, &phi, &spec)?;
    let key = format!("{spec}|{:?}", phi.on_generators(g));
    Ok((module, key))
}

fn cohomology(cfg: &RunConfig, cache: &Cache, group: &Path, degree: usize, coeff: &str, action: &str, reps: bool) -> Result<Reply> {
    let b = cfg.budget()?;
    let (g, canon) = load_group(group, &b)?;
    let (module, module_key) = coefficients(&g, action, coeff)?;
    let key = cache_key(&["cohomology", &canon, &module_key, &degree.to_string(), &reps.to_string()]);
    let v = cache.get_or_insert(&key, || Ok(io::cohomology_json(&cohomology_group(&g, &module, degree, &b)?, reps)))?;
    let mut text = format!("H^{degree} = {} (order {})\n", list(&u64s(&v["invariants"])), v["order"].as_str().unwrap_or("?"));
    if reps {
        text += &io::to_pretty(&v["representatives"]);
    }
    Ok(Reply::ok(v, text))
}

fn regular_rep(cfg: &RunConfig, group: &Path, action: &str, cocycle: &Path) -> Result<Reply> {
    let b = cfg.budget()?;
    let (g, _) = load_group(group, &b)?;
    let phi = parse_action(&g, action)?;
    let alpha = io::parse_cocycle(&g, &read(cocycle)?)?;
    let f = regular_semiprojective_rep(&g, &alpha, &phi)?;
    let v = io::rep_json(&f);
    let text = io::to_pretty(&v);
    Ok(Reply::ok(v, text))
}

fn lift(cfg: &RunConfig, rep: &Path, extension: &Path) -> Result<Reply> {
    let b = cfg.budget()?;
    let ext = io::parse_extension(&read(extension)?, &b)?;
    let g = ext.base();
    let f = io::parse_rep(g, &read(rep)?)?;
    let phi = f.phi(g)?;
    let mult = twisted_multiplier(g, &phi, &b)?;
    match lift_over_extension(&f, &ext, &mult, &b)? {
        LiftOutcome::Lifted(l) => {
            verify_lift(&f, &ext, &l.maps)?;
            let v = io::maps_json(&l.maps);
            let text = io::to_pretty(&v);
            Ok(Reply::ok(v, text))
        }
        LiftOutcome::Failed(e) => {
            let v = tag(json!({
                "lifted": false,
                "multiplier": mult.invariants(),
                "alpha_class": e.alpha_class,
                "required_class": e.required_class,
                "transgression_image": e.transgression_image,
            }));
            let text = format!(
                "no lift: the class {} of the multiplier {} is not in the transgression image {:?}\n",
                list(&e.required_class),
                list(mult.invariants()),
                e.transgression_image
            );
            Ok(Reply { value: v, text, code: 4 })
        }
    }
}

fn heisenberg(cfg: &RunConfig) -> Result<Reply> {
    let r = heisenberg_demo(&cfg.budget()?)?;
    let mut text = format!(
        "closure order {}\nscalar subgroup order {} generated by {}\nquotient order {}\n",
        r.closure_order, r.scalar_order, r.scalar_generator, r.quotient_order
    );
    text += &format!(
        "scalar stabilizers: Lambda1 order {}, Lambda2 order {}\n",
        r.lambda1_stabilizer.order(),
        r.lambda2_stabilizer.order()
    );
    for c in &r.lattice_preservation {
        text += &format!("{} {} {}\n", c.generator, if c.preserves { "preserves" } else { "does not preserve" }, c.lattice);
    }
    for n in &r.not_reproduced {
        text += &format!("not computed: {n}\n");
    }
    let v = tag(serde_json::to_value(&r).expect("report serializes"));
    Ok(Reply::ok(v, text))
}

fn selftest(cfg: &RunConfig) -> Result<Reply> {
    let r = run_selftest(cfg.seed, &cfg.budget()?);
    let text: String = r
        .checks
        .iter()
        .map(|c| format!("{} {}: {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail))
        .collect();
    let code = if r.all_passed() { 0 } else { 1 };
    let v = tag(serde_json::to_value(&r).expect("report serializes"));
    Ok(Reply { value: v, text, code })
}

fn run(cli: &Cli) -> Result<Reply> {
    let cfg = &cli.config;
    let cache = Cache::new(cfg.cache_dir.clone());
    match &cli.command {
        Command::Multiplier { group, action } => multiplier(cfg, &cache, group, action),
        Command::Repgroups { group, action } => repgroups(cfg, group, action),
        Command::Cohomology { group, degree, coeff, action, reps } => {
            cohomology(cfg, &cache, group, *degree, coeff, action, *reps)
        }
        Command::RegularRep { group, action, cocycle } => regular_rep(cfg, group, action, cocycle),
        Command::Lift { rep, extension } => lift(cfg, rep, extension),
        Command::Heisenberg => heisenberg(cfg),
        Command::Selftest => selftest(cfg),
    }
}

fn emit(cfg: &RunConfig, body: &str) -> std::io::Result<()> {
    match &cfg.output {
        Some(path) => fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(reply) => {
            let body = match cli.config.format {
                Format::Json => io::to_pretty(&reply.value),
                Format::Text => reply.text,
            };
            if let Err(e) = emit(&cli.config, &body) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(reply.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
