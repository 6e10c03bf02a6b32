//! Minimal Wavefront OBJ input and output for triangle meshes.
//!
//! Only `v` and `f` records are read; faces may use the `v`, `v/vt`,
//! `v//vn` and `v/vt/vn` forms and negative (relative) indices. Other records
//! are skipped. Faces with more than three corners are rejected.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::linalg3::Vec3;
use crate::meshblend::TriMesh;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::ObjParse {
        line,
        message: message.into(),
    }
}

fn parse_index(token: &str, vertex_count: usize, line: usize) -> Result<usize> {
    let head = token.split('/').next().unwrap_or("");
    let i: i64 = head
        .parse()
        .map_err(|_| parse_error(line, format!("bad vertex index `{token}`")))?;
    let resolved = if i > 0 {
        i - 1
    } else if i < 0 {
        vertex_count as i64 + i
    } else {
        -1
    };
    if resolved < 0 || resolved as usize >= vertex_count {
        return Err(parse_error(
            line,
            format!("vertex index {i} out of range (have {vertex_count})"),
        ));
    }
    Ok(resolved as usize)
}

/// Reads a triangle mesh.
pub fn read_obj(reader: impl BufRead) -> Result<TriMesh> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (n, text) in reader.lines().enumerate() {
        let line = n + 1;
        let text = text.map_err(|e| parse_error(line, e.to_string()))?;
        let mut tokens = text.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let coords: Vec<f64> = tokens
                    .take(3)
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_error(line, format!("bad coordinate: {e}")))?;
                if coords.len() != 3 {
                    return Err(parse_error(line, "vertex needs three coordinates"));
                }
                vertices.push(Vec3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let corners = tokens
                    .map(|t| parse_index(t, vertices.len(), line))
                    .collect::<Result<Vec<_>>>()?;
                if corners.len() != 3 {
                    return Err(parse_error(
                        line,
                        format!("only triangles are supported, face has {} corners", corners.len()),
                    ));
                }
                faces.push([corners[0], corners[1], corners[2]]);
            }
            _ => {}
        }
    }
    TriMesh::new(vertices, faces)
}

/// Writes `v` and `f` records. Coordinates use the shortest representation
/// that reads back to the same value.
pub fn write_obj(mut writer: impl Write, mesh: &TriMesh) -> std::io::Result<()> {
    for v in &mesh.vertices {
        writeln!(writer, "v {} {} {}", v.x, v.y, v.z)?;
    }
    for f in &mesh.faces {
        writeln!(writer, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}
