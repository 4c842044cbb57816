use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::codec::{encode_decode, CodecConfig};
use crate::deblock::{deblock_pipeline, DeblockConfig};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::metrics::{mse, psnr_from_mse, Psnr};
use crate::pgm::load_pgm;

pub const CSV_HEADER: [&str; 7] = [
    "image",
    "quality",
    "psnr_blocked",
    "mse_blocked",
    "psnr_deblocked",
    "mse_deblocked",
    "delta_psnr",
];

#[derive(Debug, Clone)]
pub struct CorpusImage {
    pub name: String,
    pub image: Image,
}

impl CorpusImage {
    pub fn new(name: impl Into<String>, image: Image) -> Self {
        Self {
            name: name.into(),
            image,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub image: String,
    pub quality: u32,
    pub psnr_blocked: Psnr,
    pub mse_blocked: f64,
    pub psnr_deblocked: Psnr,
    pub mse_deblocked: f64,
    pub delta_psnr: f64,
}

#[derive(Debug)]
pub struct CellFailure {
    pub image: String,
    pub quality: Option<u32>,
    pub error: Error,
}

#[derive(Debug, Default)]
pub struct MatrixOutcome {
    pub rows: Vec<ExperimentRow>,
    pub failures: Vec<CellFailure>,
}

fn delta(deblocked: Psnr, blocked: Psnr) -> f64 {
    match (deblocked, blocked) {
        (Psnr::Identical, Psnr::Identical) => 0.0,
        (d, b) => d.db() - b.db(),
    }
}

/// Codec simulation, deblocking and metrics for one (image, quality) cell.
pub fn run_cell(
    name: &str,
    original: &Image,
    quality: u32,
    cfg: &DeblockConfig,
) -> Result<ExperimentRow> {
    let (blocked, _) = encode_decode(original, &CodecConfig::new(quality)?)?;
    let deblocked = deblock_pipeline(&blocked, cfg)?;
    let mse_blocked = mse(original, &blocked)?;
    let mse_deblocked = mse(original, &deblocked)?;
    let psnr_blocked = psnr_from_mse(mse_blocked)?;
    let psnr_deblocked = psnr_from_mse(mse_deblocked)?;
    Ok(ExperimentRow {
        image: name.to_owned(),
        quality,
        psnr_blocked,
        mse_blocked,
        psnr_deblocked,
        mse_deblocked,
        delta_psnr: delta(psnr_deblocked, psnr_blocked),
    })
}

/// Runs every cell of the matrix. Cells run in parallel; rows come back in
/// (image, quality) input order. A failing cell is recorded and skipped.
pub fn run_matrix(images: &[CorpusImage], qualities: &[u32], cfg: &DeblockConfig) -> MatrixOutcome {
    let cells: Vec<(&CorpusImage, u32)> = images
        .iter()
        .flat_map(|img| qualities.iter().map(move |&q| (img, q)))
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|(img, q)| (img.name.clone(), *q, run_cell(&img.name, &img.image, *q, cfg)))
        .collect();
    let mut out = MatrixOutcome::default();
    for (image, quality, res) in results {
        match res {
            Ok(row) => out.rows.push(row),
            Err(error) => out.failures.push(CellFailure {
                image,
                quality: Some(quality),
                error,
            }),
        }
    }
    out
}

/// Loads every `.pgm` file of `dir` (sorted by file name), cropped to the
/// block grid. Unreadable files are returned as failures.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<(Vec<CorpusImage>, Vec<CellFailure>)> {
    let mut paths: Vec<_> = fs::read_dir(dir.as_ref())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Harness(format!(
            "no .pgm files in {}",
            dir.as_ref().display()
        )));
    }
    let mut images = Vec::new();
    let mut failures = Vec::new();
    for path in paths {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match load_pgm(&path).and_then(|img| img.crop_to_block_grid()) {
            Ok(image) => images.push(CorpusImage { name, image }),
            Err(error) => failures.push(CellFailure {
                image: name,
                quality: None,
                error,
            }),
        }
    }
    Ok((images, failures))
}

fn fmt4(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.4}")
    }
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.image.clone(),
            r.quality.to_string(),
            fmt4(r.psnr_blocked.db()),
            fmt4(r.mse_blocked),
            fmt4(r.psnr_deblocked.db()),
            fmt4(r.mse_deblocked),
            fmt4(r.delta_psnr),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Whitespace-separated PSNR/MSE-vs-quality series, one blank-line separated
/// block per image, quality ascending within each block.
pub fn write_plot_data<W: Write>(rows: &[ExperimentRow], mut out: W) -> Result<()> {
    writeln!(
        out,
        "# image quality psnr_blocked psnr_deblocked mse_blocked mse_deblocked"
    )?;
    let mut names: Vec<&str> = Vec::new();
    for r in rows {
        if !names.contains(&r.image.as_str()) {
            names.push(&r.image);
        }
    }
    for (i, name) in names.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        let mut series: Vec<&ExperimentRow> = rows.iter().filter(|r| r.image == *name).collect();
        series.sort_by_key(|r| r.quality);
        for r in series {
            writeln!(
                out,
                "{} {} {} {} {} {}",
                name.replace(char::is_whitespace, "_"),
                r.quality,
                fmt4(r.psnr_blocked.db()),
                fmt4(r.psnr_deblocked.db()),
                fmt4(r.mse_blocked),
                fmt4(r.mse_deblocked),
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(image: &str, quality: u32) -> ExperimentRow {
        ExperimentRow {
            image: image.into(),
            quality,
            psnr_blocked: Psnr::Finite(30.0 + f64::from(quality)),
            mse_blocked: 10.0,
            psnr_deblocked: Psnr::Identical,
            mse_deblocked: 0.0,
            delta_psnr: f64::INFINITY,
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&[row("a", 5)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "image,quality,psnr_blocked,mse_blocked,psnr_deblocked,mse_deblocked,delta_psnr\n\
             a,5,35.0000,10.0000,inf,0.0000,inf\n"
        );
    }

    #[test]
    fn plot_data_sorted_by_quality() {
        let mut buf = Vec::new();
        write_plot_data(&[row("a", 10), row("a", 1), row("b", 5)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with('#'));
        assert!(lines[1].starts_with("a 1 "));
        assert!(lines[2].starts_with("a 10 "));
        assert_eq!(lines[3], "");
        assert!(lines[4].starts_with("b 5 "));
    }

    #[test]
    fn delta_of_identical() {
        assert_eq!(delta(Psnr::Identical, Psnr::Identical), 0.0);
        assert_eq!(delta(Psnr::Finite(3.0), Psnr::Finite(1.5)), 1.5);
    }

    #[test]
    fn matrix_records_failures() {
        let good = CorpusImage::new("good", Image::filled(16, 16, 100.0).unwrap());
        let bad = CorpusImage::new("bad", Image::filled(12, 16, 100.0).unwrap());
        let out = run_matrix(&[good, bad], &[1, 5], &DeblockConfig::default());
        assert_eq!(out.rows.len(), 2);
        assert_eq!(out.failures.len(), 2);
        assert!(out.failures.iter().all(|f| f.image == "bad"));
    }
}
