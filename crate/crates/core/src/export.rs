//! CSV and ASCII PLY writers for point clouds and tumble traces.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{Dim, Vec3};
use crate::orbit::OrbitCloud;
use crate::tetra::{TumbleTrace, Vertex};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("output path is empty")]
    EmptyPath,
    #[error("unknown export format `{0}`")]
    UnknownFormat(String),
    #[error("malformed csv at line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Ply,
}

impl FromStr for Format {
    type Err = ExportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "ply" => Ok(Format::Ply),
            other => Err(ExportError::UnknownFormat(other.to_string())),
        }
    }
}

/// `x,y[,z],word_len` with nine significant digits.
pub fn cloud_csv(cloud: &OrbitCloud) -> String {
    points_csv(cloud.dim(), cloud.points(), cloud.word_len())
}

pub fn points_csv(dim: Dim, points: &[Vec3], word_len: &[usize]) -> String {
    let three = dim == Dim::Three;
    let mut out = String::from(if three { "x,y,z,word_len\n" } else { "x,y,word_len\n" });
    for (p, len) in points.iter().zip(word_len) {
        if three {
            writeln!(out, "{:.8e},{:.8e},{:.8e},{}", p.x, p.y, p.z, len).unwrap();
        } else {
            writeln!(out, "{:.8e},{:.8e},{}", p.x, p.y, len).unwrap();
        }
    }
    out
}

/// ASCII PLY; planar clouds get `z = 0`.
pub fn cloud_ply(cloud: &OrbitCloud) -> String {
    points_ply(cloud.points(), cloud.word_len())
}

pub fn points_ply(points: &[Vec3], word_len: &[usize]) -> String {
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    writeln!(out, "element vertex {}", points.len()).unwrap();
    out.push_str("property float x\nproperty float y\nproperty float z\nproperty int word_len\nend_header\n");
    for (p, len) in points.iter().zip(word_len) {
        writeln!(out, "{} {} {} {}", p.x as f32, p.y as f32, p.z as f32, len).unwrap();
    }
    out
}

/// Reads back what [`cloud_csv`] writes: points and word lengths.
pub fn parse_cloud_csv(text: &str) -> Result<(Dim, Vec<Vec3>, Vec<usize>), ExportError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(ExportError::Csv { line: 1, reason: "missing header".into() })?;
    let dim = match header.trim() {
        "x,y,word_len" => Dim::Two,
        "x,y,z,word_len" => Dim::Three,
        h => return Err(ExportError::Csv { line: 1, reason: format!("unexpected header `{h}`") }),
    };
    let width = dim.get() + 1;
    let mut points = Vec::new();
    let mut lens = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let bad = |reason: String| ExportError::Csv { line: lineno, reason };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(bad(format!("expected {width} fields, found {}", fields.len())));
        }
        let mut c = [0.0; 3];
        for (a, f) in fields[..dim.get()].iter().enumerate() {
            c[a] = f.trim().parse().map_err(|e| bad(format!("{e}")))?;
        }
        points.push(Vec3::new(c[0], c[1], c[2]));
        lens.push(fields[dim.get()].trim().parse().map_err(|e| bad(format!("{e}")))?);
    }
    Ok((dim, points, lens))
}

/// One row per vertex and frame, plus the affixed point labelled `P`.
pub fn tumble_csv(trace: &TumbleTrace) -> String {
    let mut out = String::from("step,vertex,x,y,z\n");
    for (step, s) in trace.states.iter().enumerate() {
        let rows = Vertex::ALL
            .iter()
            .map(|v| (v.label(), s.vertices[v.index()]))
            .chain(std::iter::once(('P', s.point)));
        for (label, p) in rows {
            writeln!(out, "{step},{label},{:.8e},{:.8e},{:.8e}", p.x, p.y, p.z).unwrap();
        }
    }
    out
}

fn write_text(path: &Path, text: &str) -> Result<(), ExportError> {
    if path.as_os_str().is_empty() {
        return Err(ExportError::EmptyPath);
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn export_cloud(cloud: &OrbitCloud, format: Format, path: &Path) -> Result<(), ExportError> {
    export_points(cloud.dim(), cloud.points(), cloud.word_len(), format, path)
}

/// Like [`export_cloud`] for bare points with their word lengths.
pub fn export_points(
    dim: Dim,
    points: &[Vec3],
    word_len: &[usize],
    format: Format,
    path: &Path,
) -> Result<(), ExportError> {
    let text = match format {
        Format::Csv => points_csv(dim, points, word_len),
        Format::Ply => points_ply(points, word_len),
    };
    write_text(path, &text)
}

pub fn export_tumble(trace: &TumbleTrace, path: &Path) -> Result<(), ExportError> {
    write_text(path, &tumble_csv(trace))
}
