use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use slm_dqc1::deutsch_jozsa::{self, SweepOptions};
use slm_dqc1::{dqc1, measurement};
use slm_dqc1::{
    Counts, Dephasing, Error, Mask, MeasurementConfig, PanelDims, Profile, RampConvention,
    SamplingMode, DEFAULT_PHASE_LEVELS,
};

use crate::report::{
    ComplexJson, EstimateJson, FileDigest, Inputs, Noise, Panel, RunReport, SystematicsJson,
    Timing, SCHEMA_ID,
};
use crate::{DjArgs, GenArgs, IngestArgs, MaskKind, SweepArgs, TraceArgs};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io { path: String, source: io::Error },
    Core { context: String, source: Error },
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io { .. } => 1,
            Failure::Core { source, .. } => match source {
                Error::Io(_) | Error::MalformedFile { .. } => 1,
                Error::DimsMismatch { .. } | Error::TilingMismatch { .. } => 3,
                _ => 4,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Io { path, source } => write!(f, "{path}: {source}"),
            Failure::Core { context, source } if context.is_empty() => write!(f, "{source}"),
            Failure::Core { context, source } => write!(f, "{context}: {source}"),
        }
    }
}

fn core(context: impl Into<String>) -> impl FnOnce(Error) -> Failure {
    let context = context.into();
    move |source| Failure::Core { context, source }
}

fn bare(source: Error) -> Failure {
    Failure::Core {
        context: String::new(),
        source,
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|source| Failure::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_out(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    let res = if path.as_os_str() == "-" {
        let mut out = io::stdout().lock();
        out.write_all(contents).and_then(|_| out.flush())
    } else {
        fs::write(path, contents)
    };
    res.map_err(|source| Failure::Io {
        path: path.display().to_string(),
        source,
    })
}

fn is_stdout(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn load_mask(path: &Path) -> Result<(Mask, FileDigest), Failure> {
    let bytes = read(path)?;
    let mask = Mask::from_reader(&bytes[..]).map_err(core(path.display().to_string()))?;
    Ok((mask, FileDigest::of(path, &bytes)))
}

fn load_profile(path: &Path) -> Result<(Profile, FileDigest), Failure> {
    let bytes = read(path)?;
    let load = Profile::from_reader(&bytes[..]).map_err(core(path.display().to_string()))?;
    Ok((load.profile, FileDigest::of(path, &bytes)))
}

fn load_counts(path: &Path) -> Result<(Counts, FileDigest), Failure> {
    let bytes = read(path)?;
    let grid = Counts::from_reader(&bytes[..]).map_err(core(path.display().to_string()))?;
    Ok((grid, FileDigest::of(path, &bytes)))
}

fn dephasing(p: f64) -> Result<Dephasing, Failure> {
    Dephasing::new(p).map_err(bare)
}

pub fn generate(kind: MaskKind, g: &GenArgs) -> Result<Mask, Failure> {
    let missing = |flag: &str| Failure::Usage(format!("{kind:?} mask needs --{flag}"));
    let mask = match kind {
        MaskKind::Constant => Mask::constant(g.dims, g.phase.ok_or_else(|| missing("phase"))?),
        MaskKind::HalfSplit => Mask::half_split(g.dims, g.phase_upper, g.phase_lower).map_err(bare)?,
        MaskKind::RandomBalanced => {
            let size = g.cells.ok_or_else(|| missing("cells"))?;
            let cells = slm_dqc1::CellSpec::square(size).map_err(|e| Failure::Usage(e.to_string()))?;
            Mask::random_balanced(g.dims, cells, g.seed).map_err(bare)?
        }
        MaskKind::LinearRamp => {
            let start = g.phi_start.ok_or_else(|| missing("phi-start"))?;
            let end = g.phi_end.ok_or_else(|| missing("phi-end"))?;
            let convention = if g.literal {
                RampConvention::Literal
            } else {
                RampConvention::Span
            };
            Mask::linear_ramp_with(g.dims, start, end, convention)
        }
    };
    match g.levels {
        Some(levels) => mask.quantize(levels).map_err(bare),
        None => Ok(mask),
    }
}

pub fn make_mask(kind: MaskKind, g: &GenArgs, out: &Path) -> Result<(), Failure> {
    let mask = generate(kind, g)?;
    write_out(out, mask.to_text().as_bytes())
}

fn mode_name(mode: SamplingMode) -> &'static str {
    match mode {
        SamplingMode::Binomial => "binomial",
        SamplingMode::PerPhoton => "per-photon",
    }
}

pub fn trace(a: &TraceArgs, argv: Vec<String>) -> Result<(), Failure> {
    let started = Instant::now();
    let started_at_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);

    let p = dephasing(a.p)?;
    let (mask, mask_digest) = load_mask(&a.mask)?;
    let dims = mask.dims();

    let (mut profile_digest, mut counts_digest, mut grid) = (None, None, None);
    let (profile, beam) = if let Some(path) = &a.profile {
        let (profile, digest) = load_profile(path)?;
        profile_digest = Some(digest);
        (profile, "profile")
    } else if let Some(path) = &a.counts {
        let (g, digest) = load_counts(path)?;
        counts_digest = Some(digest);
        let profile = Profile::from_counts(&g, dims).map_err(core(path.display().to_string()))?;
        grid = Some(g);
        (profile, "counts")
    } else {
        (Profile::flat(dims), "uniform")
    };

    let levels = a.levels.or(mask.levels()).unwrap_or(DEFAULT_PHASE_LEVELS);
    let analytic = dqc1::analytic_trace(&mask, &profile, p).map_err(bare)?;
    let sys = dqc1::propagate_systematics(&mask, &profile, p, levels, grid.as_ref()).map_err(bare)?;
    let analytic = analytic.with_systematics(&sys);

    let mode = SamplingMode::from(a.mode);
    let monte_carlo = match a.photons {
        Some(n) => {
            let config = MeasurementConfig::new(n, a.seed, mode).map_err(bare)?;
            let est = measurement::monte_carlo_trace(&mask, &profile, p, &config).map_err(bare)?;
            Some(EstimateJson::from(&est.with_systematics(&sys)))
        }
        None => None,
    };
    let exact = dqc1::exact_normalized_trace(&mask);

    let report = RunReport {
        schema: SCHEMA_ID.to_string(),
        command: argv,
        inputs: Inputs {
            mask: mask_digest,
            profile: profile_digest,
            counts: counts_digest,
        },
        panel: Panel {
            width: dims.width,
            height: dims.height,
        },
        noise: Noise {
            dephasing: a.p,
            phase_levels: levels,
            photons_per_basis: a.photons,
            seed: a.photons.map(|_| a.seed),
            sampling_mode: a.photons.map(|_| mode_name(mode).to_string()),
            beam: beam.to_string(),
        },
        analytic: EstimateJson::from(&analytic),
        systematics: SystematicsJson::from(&sys),
        monte_carlo,
        exact_flat: ComplexJson {
            re: exact.re,
            im: exact.im,
        },
        nondeterministic: Timing {
            started_at_unix,
            duration_seconds: started.elapsed().as_secs_f64(),
        },
    };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    write_out(&a.report, json.as_bytes())
}

pub fn dj(a: &DjArgs) -> Result<(), Failure> {
    let p = dephasing(a.p)?;
    let mask = match (&a.mask, a.kind) {
        (Some(path), _) => load_mask(path)?.0,
        (None, Some(kind)) => generate(kind, &a.gen)?,
        (None, None) => return Err(Failure::Usage("dj needs --mask or --kind".into())),
    };
    let profile = match &a.profile {
        Some(path) => load_profile(path)?.0,
        None => Profile::flat(mask.dims()),
    };
    let threshold = a.threshold.unwrap_or_else(|| deutsch_jozsa::default_threshold(p));
    let config = a
        .photons
        .map(|n| MeasurementConfig::new(n, a.gen.seed, a.mode.into()))
        .transpose()
        .map_err(bare)?;
    let v = deutsch_jozsa::run_dj(&mask, &profile, p, config.as_ref(), threshold).map_err(bare)?;
    println!(
        "VERDICT {} statistic={} threshold={}",
        v.verdict, v.statistic, v.threshold
    );
    Ok(())
}

pub fn sweep(a: &SweepArgs) -> Result<(), Failure> {
    let p = dephasing(a.p)?;
    let profile = match &a.profile {
        Some(path) => {
            let profile = load_profile(path)?.0;
            if let Some(d) = a.dims.filter(|&d| d != profile.dims()) {
                return Err(bare(Error::DimsMismatch {
                    mask: d,
                    profile: profile.dims(),
                }));
            }
            profile
        }
        None => Profile::flat(a.dims.unwrap_or_else(PanelDims::full_hd)),
    };
    let opts = SweepOptions {
        trials: a.trials,
        master_seed: a.seed,
        threshold: a.threshold.unwrap_or_else(|| deutsch_jozsa::default_threshold(p)),
        shots: a.photons.map(|n| (n, a.mode.into())),
    };
    let table = deutsch_jozsa::resolution_sweep(&a.cells, &profile, p, &opts).map_err(bare)?;
    for s in &table.summaries {
        eprintln!(
            "cell_size={} trials={} mean={} std_dev={} misclassified={}",
            s.cell_size, s.trials, s.mean, s.std_dev, s.misclassified
        );
    }
    write_out(&a.out, table.to_csv().as_bytes())
}

pub fn ingest_beam(a: &IngestArgs) -> Result<(), Failure> {
    let (grid, _) = load_counts(&a.counts)?;
    let profile = Profile::from_counts(&grid, a.dims).map_err(bare)?;
    write_out(&a.out, profile.to_text().as_bytes())?;
    let line = format!("residual={:e}", profile.total() - 1.0);
    if is_stdout(&a.out) {
        eprintln!("{line}");
    } else {
        println!("{line}");
    }
    Ok(())
}
