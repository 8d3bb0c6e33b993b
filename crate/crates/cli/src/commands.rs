//! One function per subcommand. Each returns the report body and the
//! artifacts to store; `main` adds the config header and exit status.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use symdyn::admissibility::count_admissible;
use symdyn::complexity::{bits_from_str, ctime, lex_first_incompressible};
use symdyn::deepshift::{
    member, reconstruct_from_member, verify_archive, write_archive, BlockStore, BudgetOverride, DeepConfig,
    StandardBlockFamily,
};
use symdyn::epitomes::{
    border_epitome_consistency, epitome_property_check, family_by_name, Projection, WindowSource, FAMILY_NAMES,
};
use symdyn::lowcfg::{
    build_pk, choose_border, declared_constant, describe_subpattern, reconstruct_subpattern, square_side, NNSpec,
};
use symdyn::shift::{is_locally_admissible, resolve, ShiftSpec};
use symdyn::{Alphabet, Error, Pattern, Rect, Result};

use crate::Outcome;

fn read_pattern(path: &Path) -> Result<Pattern> {
    Pattern::from_text(&fs::read_to_string(path)?)
}

/// Parse a kebab-case enum through its serde representation.
fn kebab<T: DeserializeOwned>(what: &str, s: &str) -> Result<T> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|_| Error::Invalid(format!("unknown {what} {s:?}")))
}

fn nn_spec(selector: &str) -> Result<NNSpec> {
    NNSpec::new(resolve(selector)?)
}

fn pass(result: Value) -> Outcome {
    Outcome {
        pass: true,
        result,
        artifacts: Vec::new(),
    }
}

#[derive(Args, Debug, Serialize)]
pub struct BlockCountArgs {
    /// Built-in spec name or file:PATH.
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub n: usize,
    /// Width of the ring a pattern must extend into.
    #[arg(long, default_value_t = 1)]
    pub margin: usize,
}

pub fn block_count(a: &BlockCountArgs) -> Result<Outcome> {
    let spec = resolve(&a.spec)?;
    let count = count_admissible(spec.as_ref(), a.n, a.margin)?;
    Ok(pass(
        json!({ "spec": spec.name(), "n": a.n, "margin": a.margin, "count": count }),
    ))
}

#[derive(Args, Debug, Serialize)]
pub struct DeepBuildArgs {
    /// JSON file holding a complete family config; the flags below are
    /// then ignored.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub n0: usize,
    #[arg(long, default_value_t = 3)]
    pub c: u32,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// two-block or multi-block.
    #[arg(long, default_value = "two-block")]
    pub mode: String,
    /// exact or proxy.
    #[arg(long, default_value = "exact")]
    pub oracle: String,
    /// Explicit level sides n_0,n_1,... (overrides the growth schedule).
    #[arg(long, value_delimiter = ',')]
    pub structural: Option<Vec<usize>>,
    #[arg(long)]
    pub big_t: Option<u64>,
    #[arg(long)]
    pub t_prime: Option<u64>,
    #[arg(long)]
    pub t: Option<u64>,
    /// Explicit arrangement matrices R_1,... as row-major bit strings.
    #[arg(long, value_delimiter = ',')]
    pub arrangements: Option<Vec<String>>,
    #[arg(long, default_value_t = 0)]
    pub proxy_seed: u64,
    /// Archive directory; defaults to `family` under `--out`.
    #[arg(long)]
    pub archive: Option<PathBuf>,
}

impl DeepBuildArgs {
    pub fn deep_config(&self) -> Result<DeepConfig> {
        if let Some(path) = &self.config {
            return Ok(serde_json::from_str(&fs::read_to_string(path)?)?);
        }
        let mut c = DeepConfig::new(self.n0, self.c, self.depth, kebab("mode", &self.mode)?);
        c.oracle = kebab("oracle", &self.oracle)?;
        c.structural_override = self.structural.clone();
        c.budgets = BudgetOverride {
            big_t: self.big_t,
            t_prime: self.t_prime,
            t: self.t,
        };
        c.arrangements = self.arrangements.clone();
        c.proxy_seed = self.proxy_seed;
        Ok(c)
    }
}

pub fn deep_build(a: &DeepBuildArgs, out: Option<&Path>) -> Result<Outcome> {
    let dir = match (&a.archive, out) {
        (Some(d), _) => d.clone(),
        (None, Some(o)) => o.join("family"),
        (None, None) => return Err(Error::Invalid("deep-build needs --archive or --out".into())),
    };
    let config = a.deep_config()?;
    let fam = StandardBlockFamily::build(&config)?;
    write_archive(&fam, &dir)?;
    let arrangements: Vec<Option<String>> = (1..=fam.depth())
        .map(|i| fam.arrangement(i).map(Pattern::to_text))
        .collect();
    Ok(pass(json!({
        "params": fam.params(),
        "archive": dir,
        "arrangements": arrangements,
    })))
}

#[derive(Args, Debug, Serialize)]
pub struct DeepMemberArgs {
    #[arg(long)]
    pub archive: PathBuf,
    #[arg(long)]
    pub pattern: PathBuf,
    /// Also rebuild Q_i^0 from the pattern (two-block families, N_i × N_i
    /// patterns).
    #[arg(long)]
    pub reconstruct: bool,
}

pub fn deep_member(a: &DeepMemberArgs) -> Result<Outcome> {
    let manifest = symdyn::deepshift::read_manifest(&a.archive)?;
    let fam = StandardBlockFamily::build(&manifest.params.config)?;
    let p = read_pattern(&a.pattern)?;
    let witness = member(&p, &fam)?;
    let mut artifacts = Vec::new();
    let mut reconstruction = Value::Null;
    if let (true, Some(w)) = (a.reconstruct, witness) {
        let q = reconstruct_from_member(&p, &fam)?;
        let level = w.level;
        let equal = &q == fam.block(level, 0);
        reconstruction = json!({ "level": level, "matches_stored": equal });
        artifacts.push(("reconstructed.txt".to_string(), q.to_text()));
    }
    Ok(Outcome {
        pass: witness.is_some(),
        result: json!({
            "member": witness.is_some(),
            "witness": witness,
            "reconstruction": reconstruction,
        }),
        artifacts,
    })
}

#[derive(Args, Debug, Serialize)]
pub struct DeepVerifyArgs {
    #[arg(long)]
    pub archive: PathBuf,
    /// Config JSON the archive is expected to have been built with.
    #[arg(long)]
    pub expect: Option<PathBuf>,
}

pub fn deep_verify(a: &DeepVerifyArgs) -> Result<Outcome> {
    let expected: Option<DeepConfig> = match &a.expect {
        Some(p) => Some(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => None,
    };
    let report = verify_archive(&a.archive, expected.as_ref())?;
    Ok(Outcome {
        pass: report.pass,
        result: serde_json::to_value(&report)?,
        artifacts: Vec::new(),
    })
}

#[derive(Args, Debug, Serialize)]
pub struct LowcfgBuildArgs {
    /// Nearest-neighbor spec: built-in name or file:PATH.
    #[arg(long, default_value = "hard-square")]
    pub spec: String,
    /// Builds the (2^k + 1)-square.
    #[arg(long)]
    pub k: u32,
}

pub fn lowcfg_build(a: &LowcfgBuildArgs) -> Result<Outcome> {
    let spec = nn_spec(&a.spec)?;
    let border = choose_border(&spec, a.k)?;
    let pk = build_pk(&spec, a.k, &border)?;
    let admissible = is_locally_admissible(&pk, spec.spec());
    Ok(Outcome {
        pass: admissible,
        result: json!({
            "spec": spec.spec().name(),
            "k": a.k,
            "side": pk.width(),
            "locally_admissible": admissible,
            "pattern": pk.to_text(),
        }),
        artifacts: vec![
            (format!("P_{}.txt", a.k), pk.to_text()),
            ("border.txt".to_string(), border.to_text()),
        ],
    })
}

#[derive(Args, Debug, Serialize)]
pub struct LowcfgRoundtripArgs {
    #[arg(long, default_value = "hard-square")]
    pub spec: String,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Uniform random sub-rectangle of a `side`-square.
pub fn random_rect(rng: &mut ChaCha8Rng, side: usize) -> Rect {
    let w = rng.gen_range(1..=side);
    let h = rng.gen_range(1..=side);
    let x = rng.gen_range(0..=side - w);
    let y = rng.gen_range(0..=side - h);
    Rect::new(x as i64, y as i64, w, h)
}

pub fn lowcfg_roundtrip(a: &LowcfgRoundtripArgs) -> Result<Outcome> {
    let spec = nn_spec(&a.spec)?;
    let pk = build_pk(&spec, a.k, &choose_border(&spec, a.k)?)?;
    let c = declared_constant(spec.alphabet().bits_per_letter());
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut samples = Vec::with_capacity(a.samples);
    let mut descriptions = Vec::with_capacity(a.samples);
    let mut all_ok = true;
    for _ in 0..a.samples {
        let rect = random_rect(&mut rng, square_side(a.k));
        let desc = describe_subpattern(&pk, a.k, rect)?;
        let rebuilt = reconstruct_subpattern(&desc, &spec)?;
        let exact = rebuilt == pk.subpattern(rect)?;
        let n = rect.width.max(rect.height);
        let bits = desc.bit_length();
        let ok = exact && bits <= c * n;
        all_ok &= ok;
        samples.push(json!({ "rect": rect, "n": n, "bits": bits, "bound": c * n, "exact": exact, "ok": ok }));
        descriptions.push(desc.to_json());
    }
    Ok(Outcome {
        pass: all_ok,
        result: json!({
            "spec": spec.spec().name(),
            "k": a.k,
            "declared_constant": c,
            "samples": samples,
        }),
        artifacts: vec![(
            "descriptions.json".to_string(),
            serde_json::to_string_pretty(&descriptions)? + "\n",
        )],
    })
}

#[derive(Args, Debug, Serialize)]
pub struct KcExactArgs {
    /// The string as ASCII 0/1.
    #[arg(long)]
    pub bits: String,
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
    #[arg(long, default_value_t = 256)]
    pub budget: u64,
}

pub fn kc_exact(a: &KcExactArgs) -> Result<Outcome> {
    let x = bits_from_str(&a.bits)?;
    let r = ctime(&x, a.max_len, a.budget)?;
    Ok(pass(json!({ "bits": a.bits, "complexity": r.to_json() })))
}

#[derive(Args, Debug, Serialize)]
pub struct KcIncompressibleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 256)]
    pub budget: u64,
    /// Every program shorter than this must fail to print the matrix.
    #[arg(long)]
    pub threshold: usize,
}

pub fn kc_incompressible(a: &KcIncompressibleArgs) -> Result<Outcome> {
    let m = lex_first_incompressible(a.n, a.budget, a.threshold)?;
    let check = ctime(&m.bits(), a.threshold.saturating_sub(1), a.budget)?;
    let ok = check.value.is_none();
    Ok(Outcome {
        pass: ok,
        result: json!({
            "matrix": m.to_text(),
            "below_threshold": check.to_json(),
        }),
        artifacts: vec![("matrix.txt".to_string(), m.to_text())],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowArg {
    /// Enforcer for red-black, mirror window for mirror, annulus otherwise.
    Auto,
    Annulus,
    Enforcer,
    Mirror,
}

fn default_family(spec: &str) -> &'static str {
    match spec {
        "red-black" => "profile",
        "mirror" => "mirror",
        _ => "constant",
    }
}

#[derive(Args, Debug, Serialize)]
pub struct EpitomeVerifyArgs {
    #[arg(long)]
    pub spec: String,
    /// One of profile, mirror, identity, constant, interior-popcount;
    /// defaults by spec.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = WindowArg::Auto)]
    pub window: WindowArg,
    /// Annulus width for annulus windows.
    #[arg(long, default_value_t = 1)]
    pub margin: usize,
}

fn family(name: &str) -> Result<Box<dyn symdyn::epitomes::EpitomeFamily>> {
    family_by_name(name)
        .ok_or_else(|| Error::Invalid(format!("unknown family {name:?}; expected one of {FAMILY_NAMES:?}")))
}

pub fn epitome_verify(a: &EpitomeVerifyArgs) -> Result<Outcome> {
    let spec = resolve(&a.spec)?;
    let fam = family(a.family.as_deref().unwrap_or(default_family(spec.name())))?;
    let window = match (a.window, spec.name()) {
        (WindowArg::Enforcer, _) | (WindowArg::Auto, "red-black") => WindowSource::Enforcer,
        (WindowArg::Mirror, _) | (WindowArg::Auto, "mirror") => WindowSource::Mirror,
        _ => WindowSource::Annulus { margin: a.margin },
    };
    let report = epitome_property_check(spec.as_ref(), fam.as_ref(), a.n, window)?;
    let mut artifacts = Vec::new();
    for (i, cx) in report.failures.iter().enumerate() {
        let dir = format!("counterexamples/{i:03}");
        artifacts.push((format!("{dir}/pattern.txt"), cx.pattern.clone()));
        if let Some(w) = &cx.window {
            artifacts.push((format!("{dir}/window.txt"), w.clone()));
        }
        if let Some(o) = &cx.other {
            artifacts.push((format!("{dir}/other.txt"), o.clone()));
        }
    }
    Ok(Outcome {
        pass: report.pass,
        result: serde_json::to_value(&report)?,
        artifacts,
    })
}

#[derive(Args, Debug, Serialize)]
pub struct BorderArgs {
    /// Nearest-neighbor cover spec.
    #[arg(long, default_value = "hard-square")]
    pub spec: String,
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: usize,
    /// Letter map `a=x,b=y,...` from cover letters to target letters;
    /// identity when absent.
    #[arg(long)]
    pub projection: Option<String>,
    /// Target alphabet letters, e.g. `01`; defaults to the cover alphabet.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub margin: usize,
}

pub fn border_consistency(a: &BorderArgs) -> Result<Outcome> {
    let cover = nn_spec(&a.spec)?;
    let target = match &a.target {
        Some(t) => Alphabet::new(t.chars())?,
        None => cover.alphabet().clone(),
    };
    let projection = match &a.projection {
        Some(text) => Projection::parse(cover.alphabet(), target, text)?,
        None => {
            if target.len() != cover.alphabet().len() {
                return Err(Error::Invalid("a different target alphabet needs --projection".into()));
            }
            Projection::new(cover.alphabet(), target, (0..cover.alphabet().len() as u8).collect())?
        }
    };
    let fam = family(&a.family)?;
    let report = border_epitome_consistency(&cover, &projection, fam.as_ref(), a.n, a.margin)?;
    Ok(Outcome {
        pass: report.pass,
        result: serde_json::to_value(&report)?,
        artifacts: Vec::new(),
    })
}

#[derive(Args, Debug, Serialize)]
pub struct TwoPartArgs {
    #[arg(long, default_value = "hard-square")]
    pub spec: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub pattern: PathBuf,
    /// Margin used to build the block dictionary.
    #[arg(long, default_value_t = 0)]
    pub margin: usize,
}

pub fn two_part(a: &TwoPartArgs) -> Result<Outcome> {
    let spec: Arc<dyn ShiftSpec> = resolve(&a.spec)?;
    let p = read_pattern(&a.pattern)?;
    let code = symdyn::deepshift::two_part_code(&p, a.k, spec.as_ref(), a.margin)?;
    let decoded = symdyn::deepshift::decode_two_part(&code.bits, spec.alphabet())?;
    let round_trip = decoded == p;
    let bits: String = code.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    Ok(Outcome {
        pass: round_trip && code.report.payload_bits == code.report.formula_bits,
        result: json!({ "report": code.report, "round_trip": round_trip }),
        artifacts: vec![("code.txt".to_string(), bits + "\n")],
    })
}

#[derive(Args, Debug, Serialize)]
pub struct RenderArgs {
    pub file: PathBuf,
}

pub fn render_text(a: &RenderArgs) -> Result<String> {
    Ok(read_pattern(&a.file)?.render())
}
