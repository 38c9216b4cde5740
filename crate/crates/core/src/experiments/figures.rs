//! Figure data: walk polylines over planar points, step-length histograms,
//! multi-start overlays and cover profiles, as CSV with optional SVG.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cover::{
    cover_profile_from_distances, ProfileMethod, ProfileOptions, EXACT_COVER_LIMIT,
};
use crate::error::{Error, Result};
use crate::graph::all_pairs_distances;
use crate::models::Instance;
use crate::walk::{nuv_walk, step_histogram, Histogram, WalkResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureKind {
    WalkPolyline,
    StepHistogram,
    MultiStartOverlay,
    CoverProfile,
}

impl FromStr for FigureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "walk_polyline" => Ok(FigureKind::WalkPolyline),
            "step_histogram" => Ok(FigureKind::StepHistogram),
            "multi_start_overlay" => Ok(FigureKind::MultiStartOverlay),
            "cover_profile" => Ok(FigureKind::CoverProfile),
            other => Err(Error::InvalidParameter(format!(
                "unknown figure kind '{other}' (expected walk_polyline, step_histogram, \
                 multi_start_overlay or cover_profile)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FigureRequest {
    pub kind: FigureKind,
    /// Walk starts; the overlay uses all of them, other kinds the first.
    pub starts: Vec<usize>,
    /// Histogram bin width; defaults to one thirtieth of the longest step.
    pub bin_width: Option<f64>,
    pub svg: bool,
}

fn segments<'a>(
    points: &'a [[f64; 2]],
    w: &'a WalkResult,
) -> impl Iterator<Item = (usize, [f64; 2], [f64; 2])> + 'a {
    w.order
        .windows(2)
        .enumerate()
        .map(|(i, p)| (i + 1, points[p[0]], points[p[1]]))
}

/// `step,x0,y0,x1,y1`, one straight segment per step.
pub fn write_polyline_csv<W: Write>(points: &[[f64; 2]], w: &WalkResult, mut out: W) -> Result<()> {
    writeln!(out, "step,x0,y0,x1,y1")?;
    for (i, a, b) in segments(points, w) {
        writeln!(out, "{i},{},{},{},{}", a[0], a[1], b[0], b[1])?;
    }
    Ok(())
}

/// `start,step,x0,y0,x1,y1` for several walks on the same points.
pub fn write_overlay_csv<W: Write>(
    points: &[[f64; 2]],
    walks: &[WalkResult],
    mut out: W,
) -> Result<()> {
    writeln!(out, "start,step,x0,y0,x1,y1")?;
    for w in walks {
        for (i, a, b) in segments(points, w) {
            writeln!(out, "{},{i},{},{},{},{}", w.start, a[0], a[1], b[0], b[1])?;
        }
    }
    Ok(())
}

/// `lo,hi,count`.
pub fn write_histogram_csv<W: Write>(h: &Histogram, mut out: W) -> Result<()> {
    writeln!(out, "lo,hi,count")?;
    for b in &h.bins {
        writeln!(out, "{},{},{}", b.lo, b.hi, b.count)?;
    }
    Ok(())
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Minimal SVG: the points as dots and each walk as a polyline.
pub fn render_walks_svg(points: &[[f64; 2]], walks: &[WalkResult]) -> String {
    const SIZE: f64 = 600.0;
    const PAD: f64 = 10.0;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * PAD) / span;
    // y axis points up
    let map = |p: [f64; 2]| {
        (
            PAD + (p[0] - lo[0]) * scale,
            SIZE - PAD - (p[1] - lo[1]) * scale,
        )
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, w) in walks.iter().enumerate() {
        let pts: Vec<String> = w
            .order
            .iter()
            .map(|&v| {
                let (x, y) = map(points[v]);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" stroke-opacity="0.8" points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            pts.join(" ")
        );
    }
    for &p in points {
        let (x, y) = map(p);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.8" fill="black"/>"#
        );
    }
    for w in walks {
        let (x, y) = map(points[w.start]);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="none" stroke="black"/>"#
        );
    }
    s.push_str("</svg>\n");
    s
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    Ok(std::io::BufWriter::new(fs::File::create(path)?))
}

/// Writes the requested figure data under `out_dir`, returning the files written.
pub fn emit_figure_data(
    instance: &Instance,
    req: &FigureRequest,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let g = &instance.graph;
    let starts = if req.starts.is_empty() {
        vec![0]
    } else {
        req.starts.clone()
    };
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    match req.kind {
        FigureKind::WalkPolyline | FigureKind::MultiStartOverlay => {
            let points = instance
                .points
                .as_deref()
                .ok_or(Error::MissingCoordinates("a walk polyline"))?;
            let (name, walks) = if req.kind == FigureKind::WalkPolyline {
                ("walk_polyline", vec![nuv_walk(g, starts[0])?])
            } else {
                let walks = starts
                    .iter()
                    .map(|&s| nuv_walk(g, s))
                    .collect::<Result<Vec<_>>>()?;
                ("multi_start_overlay", walks)
            };
            let csv = out_dir.join(format!("{name}.csv"));
            if req.kind == FigureKind::WalkPolyline {
                write_polyline_csv(points, &walks[0], create(&csv)?)?;
            } else {
                write_overlay_csv(points, &walks, create(&csv)?)?;
            }
            written.push(csv);
            if req.svg {
                let svg = out_dir.join(format!("{name}.svg"));
                fs::write(&svg, render_walks_svg(points, &walks))?;
                written.push(svg);
            }
        }
        FigureKind::StepHistogram => {
            let w = nuv_walk(g, starts[0])?;
            let longest = w.step_distances.iter().copied().fold(0.0, f64::max);
            let width = match req.bin_width {
                Some(b) => b,
                None if longest > 0.0 => longest / 30.0,
                None => 1.0,
            };
            let h = step_histogram(&w, width)?;
            let csv = out_dir.join("step_histogram.csv");
            write_histogram_csv(&h, create(&csv)?)?;
            written.push(csv);
        }
        FigureKind::CoverProfile => {
            let d = all_pairs_distances(g);
            let method = if g.n() <= EXACT_COVER_LIMIT {
                ProfileMethod::Exact
            } else {
                ProfileMethod::Greedy
            };
            let opts = ProfileOptions {
                max_breakpoints: (method == ProfileMethod::Greedy).then_some(256),
                ..Default::default()
            };
            let p = cover_profile_from_distances(&d, method, &opts)?;
            let csv = out_dir.join("cover_profile.csv");
            p.write_csv(create(&csv)?)?;
            written.push(csv);
        }
    }
    Ok(written)
}
