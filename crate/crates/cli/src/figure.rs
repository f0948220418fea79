//! `gaussgate figure`: CSV, SVG and metadata for the plotted quantities.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::fmt::fmt_g;
use crate::metric::evaluate;

const CONFIG: &str = include_str!("../figures.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct FigureConfig {
    pub version: u32,
    pub figure: Vec<FigureSpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct FigureSpec {
    pub id: u32,
    pub title: String,
    #[serde(default)]
    pub metric: Option<String>,
    pub param: String,
    pub axis: Axis,
    #[serde(default)]
    pub series_key: Option<String>,
    #[serde(default)]
    pub series: Vec<f64>,
    #[serde(default)]
    pub curves: Vec<String>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
}

/// One curve: its label and the metric words minus the swept parameter.
struct Curve {
    label: String,
    words: Vec<String>,
}

pub fn config() -> CliResult<FigureConfig> {
    let cfg: FigureConfig = toml::from_str(CONFIG).map_err(|e| CliError::Config(e.to_string()))?;
    for f in &cfg.figure {
        f.validate()?;
    }
    Ok(cfg)
}

pub fn find(cfg: &FigureConfig, id: u32) -> CliResult<&FigureSpec> {
    cfg.figure
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| CliError::BadArgument(format!("no figure {id}; valid ids are 2 to 8")))
}

impl FigureSpec {
    fn validate(&self) -> CliResult<()> {
        let a = &self.axis;
        if !(a.step > 0.0 && a.stop >= a.start) {
            return Err(CliError::Config(format!("figure {}: empty axis", self.id)));
        }
        let n_curves = if self.metric.is_some() { self.series.len() } else { self.curves.len() };
        if n_curves == 0 {
            return Err(CliError::Config(format!("figure {}: no series", self.id)));
        }
        if self.metric.is_some() && self.series_key.is_none() {
            return Err(CliError::Config(format!("figure {}: series_key missing", self.id)));
        }
        Ok(())
    }

    /// Axis points as printed, so that every CSV row re-parses to the evaluated value.
    pub fn grid(&self) -> Vec<String> {
        let a = &self.axis;
        let n = ((a.stop - a.start) / a.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| fmt_g(a.start + k as f64 * a.step)).collect()
    }

    fn fixed_words(&self) -> Vec<String> {
        self.fixed.iter().map(|(k, v)| format!("{k}={}", fmt_g(*v))).collect()
    }

    fn curves(&self) -> Vec<Curve> {
        match (&self.metric, &self.series_key) {
            (Some(m), Some(key)) => self
                .series
                .iter()
                .map(|s| {
                    let label = format!("{key}={}", fmt_g(*s));
                    let mut words = vec![m.clone(), label.clone()];
                    words.extend(self.fixed_words());
                    Curve { label, words }
                })
                .collect(),
            _ => self
                .curves
                .iter()
                .map(|c| {
                    let mut words = vec![c.clone()];
                    words.extend(self.fixed.iter().filter(|(k, _)| c == "d2" || *k != "M").map(|(k, v)| format!("{k}={}", fmt_g(*v))));
                    Curve { label: c.clone(), words }
                })
                .collect(),
        }
    }
}

pub struct FigureData {
    pub spec: FigureSpec,
    pub rows: Vec<(String, String, f64)>,
}

pub fn compute(spec: &FigureSpec) -> CliResult<FigureData> {
    let grid = spec.grid();
    let curves = spec.curves();
    let jobs: Vec<(usize, usize)> = (0..curves.len()).flat_map(|c| (0..grid.len()).map(move |g| (c, g))).collect();
    let values = jobs
        .par_iter()
        .map(|&(c, g)| {
            let mut words = curves[c].words.clone();
            words.push(format!("{}={}", spec.param, grid[g]));
            evaluate(&words).map(|v| v.value)
        })
        .collect::<CliResult<Vec<f64>>>()?;
    let rows = jobs
        .iter()
        .zip(values)
        .map(|(&(c, g), v)| (grid[g].clone(), curves[c].label.clone(), v))
        .collect();
    Ok(FigureData { spec: spec.clone(), rows })
}

pub fn csv(data: &FigureData) -> String {
    let mut s = format!("{},series,value\n", data.spec.param);
    for (x, label, v) in &data.rows {
        s.push_str(&format!("{x},{label},{}\n", fmt_g(*v)));
    }
    s
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub fn svg(data: &FigureData) -> String {
    let (w, h, m) = (640.0, 420.0, 56.0);
    let pts: Vec<(f64, f64)> = data.rows.iter().map(|(x, _, v)| (x.parse().unwrap_or(0.0), *v)).collect();
    let (x0, x1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.0), a.1.max(p.0)));
    let (mut y0, mut y1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.1), a.1.max(p.1)));
    y0 = y0.min(0.0);
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let xs = |x: f64| m + (x - x0) / (x1 - x0).max(1e-300) * (w - 2.0 * m);
    let ys = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"20\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n\
         <line x1=\"{m}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        w / 2.0,
        escape(&data.spec.title),
        h - m,
        w - m,
        h - m,
        h - m
    );
    for x in [x0, x1] {
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            xs(x),
            h - m + 16.0,
            fmt_g_short(x)
        ));
    }
    for y in [y0, y1] {
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            m - 4.0,
            ys(y) + 4.0,
            fmt_g_short(y)
        ));
    }
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        w / 2.0,
        h - 14.0,
        escape(&data.spec.param)
    ));
    let mut labels: Vec<&str> = Vec::new();
    for (_, l, _) in &data.rows {
        if !labels.contains(&l.as_str()) {
            labels.push(l);
        }
    }
    for (i, label) in labels.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let line: Vec<String> = data
            .rows
            .iter()
            .filter(|r| r.1 == *label)
            .map(|(x, _, v)| format!("{:.2},{:.2}", xs(x.parse().unwrap_or(0.0)), ys(*v)))
            .collect();
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            line.join(" ")
        ));
        let ly = m + 8.0 + 16.0 * i as f64;
        s.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{}</text>\n",
            w - m - 110.0,
            w - m - 90.0,
            w - m - 84.0,
            ly + 4.0,
            escape(label)
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_g_short(x: f64) -> String {
    crate::fmt::fmt_g_prec(x, 4)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[derive(Serialize)]
struct Meta<'a> {
    figure: u32,
    title: &'a str,
    config_version: u32,
    grid_provenance: &'static str,
    metric_call: String,
    param: &'a str,
    axis: &'a Axis,
    series_key: Option<&'a str>,
    series: &'a [f64],
    curves: &'a [String],
    fixed: &'a BTreeMap<String, f64>,
    rows: usize,
    files: [String; 2],
}

pub fn meta(data: &FigureData, version: u32) -> CliResult<String> {
    let spec = &data.spec;
    let metric_call = match (&spec.metric, &spec.series_key) {
        (Some(m), Some(k)) => format!("gaussgate metric {m} {k}=<series> {}=<{}> {}", spec.param, spec.param, spec.fixed_words().join(" ")),
        _ => format!("gaussgate metric <series> {}=<{}> {}", spec.param, spec.param, spec.fixed_words().join(" ")),
    };
    let m = Meta {
        figure: spec.id,
        title: &spec.title,
        config_version: version,
        grid_provenance: "artifact choice: axis sampling and series values are not taken from published data",
        metric_call: metric_call.trim_end().to_string(),
        param: &spec.param,
        axis: &spec.axis,
        series_key: spec.series_key.as_deref(),
        series: &spec.series,
        curves: &spec.curves,
        fixed: &spec.fixed,
        rows: data.rows.len(),
        files: [format!("fig{}.csv", spec.id), format!("fig{}.svg", spec.id)],
    };
    Ok(serde_json::to_string_pretty(&m)? + "\n")
}

pub fn write(id: u32, out: &Path) -> CliResult<Vec<PathBuf>> {
    let cfg = config()?;
    let spec = find(&cfg, id)?;
    let data = compute(spec)?;
    fs::create_dir_all(out)?;
    let files = [
        (out.join(format!("fig{id}.csv")), csv(&data)),
        (out.join(format!("fig{id}.svg")), svg(&data)),
        (out.join(format!("fig{id}.meta.json")), meta(&data, cfg.version)?),
    ];
    let mut written = Vec::new();
    for (path, body) in files {
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}
