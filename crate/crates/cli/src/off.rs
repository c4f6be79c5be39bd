//! OFF mesh export for tetrahedra.

use simplex_core::linalg::VecN;
use simplex_core::RealizationResult;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OffError {
    #[error("OFF export needs a 3-simplex, got dimension {0}")]
    UnsupportedDimension(usize),
    #[error("malformed OFF: {0}")]
    Malformed(String),
}

/// A parsed OFF mesh: vertex coordinates and polygon index lists.
#[derive(Clone, Debug, PartialEq)]
pub struct OffMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl OffMesh {
    /// Area of face `f`, by fan triangulation from its first vertex.
    pub fn face_area(&self, f: usize) -> f64 {
        let idx = &self.faces[f];
        let p0 = self.vertices[idx[0]];
        let mut acc = [0.0; 3];
        for w in idx[1..].windows(2) {
            let c = cross(sub(self.vertices[w[0]], p0), sub(self.vertices[w[1]], p0));
            acc = [acc[0] + c[0], acc[1] + c[1], acc[2] + c[2]];
        }
        0.5 * dot(acc, acc).sqrt()
    }

    /// Unnormalized face normal following the stored winding.
    pub fn face_normal(&self, f: usize) -> [f64; 3] {
        let idx = &self.faces[f];
        let p = |i: usize| self.vertices[idx[i]];
        cross(sub(p(1), p(0)), sub(p(2), p(0)))
    }
}

/// Writes the tetrahedron as ASCII OFF with 17 significant digits.
///
/// Face k is the facet opposite vertex k, wound counter-clockwise seen from
/// outside.
pub fn export_off(result: &RealizationResult) -> Result<String, OffError> {
    let n = result.vertices.dim();
    if n != 3 {
        return Err(OffError::UnsupportedDimension(n));
    }
    let pts: Vec<[f64; 3]> = result
        .vertices
        .vectors()
        .iter()
        .map(|v: &VecN| [v[0], v[1], v[2]])
        .collect();
    let mut out = String::from("OFF\n4 4 6\n");
    for p in &pts {
        out.push_str(&format!("{:.16e} {:.16e} {:.16e}\n", p[0], p[1], p[2]));
    }
    for opposite in 0..4 {
        let mut face: Vec<usize> = (0..4).filter(|&i| i != opposite).collect();
        let normal = cross(sub(pts[face[1]], pts[face[0]]), sub(pts[face[2]], pts[face[0]]));
        if dot(normal, sub(pts[opposite], pts[face[0]])) > 0.0 {
            face.swap(1, 2);
        }
        out.push_str(&format!("3 {} {} {}\n", face[0], face[1], face[2]));
    }
    Ok(out)
}

/// Reads an ASCII OFF mesh. Comments (`#`) and blank lines are skipped.
pub fn parse_off(text: &str) -> Result<OffMesh, OffError> {
    let bad = |m: &str| OffError::Malformed(m.to_owned());
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    if tokens.next() != Some("OFF") {
        return Err(bad("missing OFF header"));
    }
    let mut next_num = |what: &str| -> Result<f64, OffError> {
        tokens
            .next()
            .ok_or_else(|| bad(&format!("unexpected end of input reading {what}")))?
            .parse::<f64>()
            .map_err(|e| bad(&format!("{what}: {e}")))
    };
    let nv = next_num("vertex count")? as usize;
    let nf = next_num("face count")? as usize;
    let _edges = next_num("edge count")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        vertices.push([next_num("x")?, next_num("y")?, next_num("z")?]);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let k = next_num("face size")? as usize;
        let face = (0..k)
            .map(|_| {
                let i = next_num("face index")? as usize;
                if i < nv {
                    Ok(i)
                } else {
                    Err(bad("face index out of range"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if k < 3 {
            return Err(bad("face with fewer than 3 vertices"));
        }
        faces.push(face);
    }
    Ok(OffMesh { vertices, faces })
}
