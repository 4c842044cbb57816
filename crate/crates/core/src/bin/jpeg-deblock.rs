use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jpeg_deblock::codec::{encode_decode, CodecConfig};
use jpeg_deblock::deblock::DeblockConfig;
use jpeg_deblock::harness::{
    gen_synthetic, load_corpus, run_matrix, write_csv, write_plot_data, CorpusImage,
    SyntheticKind, SyntheticSpec,
};
use jpeg_deblock::metrics::MetricsReport;
use jpeg_deblock::pgm::{load_pgm, save_pgm};
use jpeg_deblock::{deblock_pipeline, Error, Image, Result};

/// Block-DCT compression simulator and deblocking post-filter for 8-bit PGM images.
#[derive(Parser)]
#[command(name = "jpeg-deblock", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate lossy block-DCT compression of a PGM image.
    Encode {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, short, value_parser = clap::value_parser!(u32).range(1..=100))]
        quality: u32,
        /// Crop the input to a multiple of 8 instead of rejecting it.
        #[arg(long)]
        crop: bool,
        /// Also print a first-order entropy estimate of the coefficient stream.
        #[arg(long)]
        bpp: bool,
    },
    /// Run the deblocking post-filter on a blocky PGM image.
    Deblock {
        input: PathBuf,
        output: PathBuf,
        /// Pristine image to measure against.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Run the (image, quality) matrix and emit CSV and plot data.
    Experiment {
        /// Directory of .pgm files.
        corpus: Option<PathBuf>,
        /// Synthetic fixture, `kind[:WxH[:seed]]`; repeatable.
        #[arg(long = "synthetic")]
        synthetic: Vec<SyntheticSpec>,
        #[arg(long, value_delimiter = ',', default_value = "1,5,10",
              value_parser = clap::value_parser!(u32).range(1..=100))]
        qualities: Vec<u32>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        plotdata: Option<PathBuf>,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Write a synthetic test image.
    Synth {
        output: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: SyntheticKind,
        #[arg(long, default_value_t = 256)]
        width: usize,
        #[arg(long, default_value_t = 256)]
        height: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct FilterArgs {
    /// Boundary difference that triggers smoothing.
    #[arg(long, default_value_t = 8.0)]
    threshold: f64,
    /// Flagged-row count a segment must exceed to be treated as blocked.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(0..=8))]
    th: u8,
    /// Gaussian window length (odd, >= 3).
    #[arg(long, default_value_t = 5, value_parser = parse_window)]
    window: usize,
    #[arg(long)]
    symmetric_taper: bool,
}

impl FilterArgs {
    fn config(&self) -> Result<DeblockConfig> {
        let cfg = DeblockConfig {
            smooth_threshold: self.threshold,
            row_threshold: self.th,
            window: self.window,
            symmetric_taper: self.symmetric_taper,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_window(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 3 || n % 2 == 0 {
        return Err(format!("window must be odd and >= 3, got {n}"));
    }
    Ok(n)
}

fn parse_kind(s: &str) -> std::result::Result<SyntheticKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode {
            input,
            output,
            quality,
            crop,
            bpp,
        } => {
            let mut img = load_pgm(&input)?;
            if crop {
                img = img.crop_to_block_grid()?;
            }
            let cfg = CodecConfig::new(quality)?.with_bpp(bpp);
            let (blocked, sidecar) = encode_decode(&img, &cfg)?;
            save_pgm(&blocked, &output)?;
            let report = MetricsReport::compare(&img, &blocked)?
                .with_quality(quality)
                .with_bpp(sidecar.bpp);
            println!("{report}");
        }
        Command::Deblock {
            input,
            output,
            reference,
            filter,
        } => {
            let cfg = filter.config()?;
            let blocky = load_pgm(&input)?;
            let out = deblock_pipeline(&blocky, &cfg)?;
            save_pgm(&out, &output)?;
            if let Some(reference) = reference {
                let reference = load_pgm(&reference)?;
                let before = MetricsReport::compare(&reference, &blocky)?;
                let after = MetricsReport::compare(&reference, &out)?.with_config(cfg);
                println!("blocked   {before}");
                println!("deblocked {after}");
                let delta = match (after.psnr, before.psnr) {
                    (a, b) if a == b => 0.0,
                    (a, b) => a.db() - b.db(),
                };
                println!("delta_psnr={delta:.4}");
            }
        }
        Command::Experiment {
            corpus,
            synthetic,
            qualities,
            csv,
            plotdata,
            filter,
        } => {
            let cfg = filter.config()?;
            let mut images = Vec::new();
            let mut errors = 0usize;
            if let Some(dir) = corpus {
                let (loaded, failures) = load_corpus(dir)?;
                for f in &failures {
                    eprintln!("skipping {}: {}", f.image, f.error);
                }
                errors += failures.len();
                images.extend(loaded);
            }
            for spec in &synthetic {
                match gen_synthetic(spec) {
                    Ok(img) => images.push(CorpusImage::new(spec.to_string(), img)),
                    Err(e) => {
                        eprintln!("skipping {spec}: {e}");
                        errors += 1;
                    }
                }
            }
            if images.is_empty() {
                return Err(Error::Harness("empty corpus".into()));
            }
            let mut qualities = qualities;
            qualities.sort_unstable();
            qualities.dedup();
            let outcome = run_matrix(&images, &qualities, &cfg);
            for f in &outcome.failures {
                eprintln!(
                    "cell {} q={} failed: {}",
                    f.image,
                    f.quality.map_or("-".into(), |q| q.to_string()),
                    f.error
                );
            }
            errors += outcome.failures.len();
            match csv {
                Some(path) => write_csv(&outcome.rows, BufWriter::new(File::create(path)?))?,
                None => write_csv(&outcome.rows, std::io::stdout().lock())?,
            }
            if let Some(path) = plotdata {
                write_plot_data(&outcome.rows, BufWriter::new(File::create(path)?))?;
            }
            if outcome.rows.is_empty() && errors > 0 {
                return Err(Error::Harness("every cell failed".into()));
            }
        }
        Command::Synth {
            output,
            kind,
            width,
            height,
            seed,
        } => {
            let img: Image = gen_synthetic(&SyntheticSpec::new(kind, width, height, seed))?;
            save_pgm(&img, &output)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
