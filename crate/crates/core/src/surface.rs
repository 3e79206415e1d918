//! Closed triangulated surfaces with one-point quadrature, volume grids and
//! surface norms.
//!
//! Mesh text format (0-based face indices):
//!
//! ```text
//! vcount fcount
//! x y z        (vcount lines)
//! i j k        (fcount lines)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::cqalg::ComplexQuaternion;
use crate::error::{Error, Result};
use crate::field::QuatField;
use crate::{norm3, reflect_x3, sub3, Point};

const CHUNK: usize = 512;

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Point, b: Point) -> Point {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn normalize(a: Point) -> Point {
    scale(a, 1.0 / norm3(a))
}

/// Area of the spherical triangle spanned by unit vectors `a`, `b`, `c`.
fn spherical_triangle_area(a: Point, b: Point, c: Point) -> f64 {
    let num = dot(a, cross(b, c)).abs();
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

/// Signed solid angle of triangle `(a, b, c)` seen from the origin.
fn solid_angle(a: Point, b: Point, c: Point) -> f64 {
    let (la, lb, lc) = (norm3(a), norm3(b), norm3(c));
    let num = dot(a, cross(b, c));
    let den = la * lb * lc + dot(a, b) * lc + dot(b, c) * la + dot(c, a) * lb;
    2.0 * num.atan2(den)
}

/// A closed surface `Γ` with one quadrature node per triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<Point>,
    pub faces: Vec<[usize; 3]>,
    /// Quadrature nodes, one per face.
    pub nodes: Vec<Point>,
    /// Outward unit normals at the nodes.
    pub normals: Vec<Point>,
    /// Quadrature weights (areas).
    pub weights: Vec<f64>,
    pub centroid: Point,
    /// Largest node distance from `centroid`.
    pub enclosing_radius: f64,
    /// Longest triangle edge.
    pub max_edge: f64,
    /// Subdivision level for icospheres, `None` for imported meshes.
    pub level: Option<u32>,
}

const ICOSAHEDRON_FACES: [[usize; 3]; 20] = [
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
];

fn unit_icosphere(level: u32) -> (Vec<Point>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Point> = [
        [-1.0, phi, 0.0], [1.0, phi, 0.0], [-1.0, -phi, 0.0], [1.0, -phi, 0.0],
        [0.0, -1.0, phi], [0.0, 1.0, phi], [0.0, -1.0, -phi], [0.0, 1.0, -phi],
        [phi, 0.0, -1.0], [phi, 0.0, 1.0], [-phi, 0.0, -1.0], [-phi, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalize)
    .collect();
    let mut faces = ICOSAHEDRON_FACES.to_vec();

    for _ in 0..level {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point>| {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                vertices.push(normalize(add(vertices[a], vertices[b])));
                vertices.len() - 1
            })
        };
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (vertices, faces)
}

/// Subdivided icosahedron on the sphere `|x - center| = radius`.
///
/// Each triangle contributes one node: its centroid projected radially onto
/// the sphere, with the exact outward sphere normal and the area of the
/// spherical triangle as weight, so the weights sum to `4π R²` exactly.
pub fn icosphere(radius: f64, level: u32, center: Point) -> SurfaceMesh {
    assert!(radius > 0.0, "radius must be positive");
    let (unit, faces) = unit_icosphere(level);
    let mut nodes = Vec::with_capacity(faces.len());
    let mut normals = Vec::with_capacity(faces.len());
    let mut weights = Vec::with_capacity(faces.len());
    let mut max_edge: f64 = 0.0;
    for &[a, b, c] in &faces {
        let (pa, pb, pc) = (unit[a], unit[b], unit[c]);
        let n = normalize(add(add(pa, pb), pc));
        nodes.push(add(center, scale(n, radius)));
        normals.push(n);
        weights.push(spherical_triangle_area(pa, pb, pc) * radius * radius);
        for (p, q) in [(pa, pb), (pb, pc), (pc, pa)] {
            max_edge = max_edge.max(norm3(sub3(p, q)) * radius);
        }
    }
    let vertices = unit.into_iter().map(|v| add(center, scale(v, radius))).collect();
    SurfaceMesh {
        vertices,
        faces,
        nodes,
        normals,
        weights,
        centroid: center,
        enclosing_radius: radius,
        max_edge,
        level: Some(level),
    }
}

impl SurfaceMesh {
    /// Flat-triangle quadrature: centroid nodes, face normals, face areas.
    ///
    /// The faces are reoriented if necessary so that normals point out of the
    /// enclosed volume.
    pub fn from_triangles(vertices: Vec<Point>, mut faces: Vec<[usize; 3]>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::MeshFormat("mesh has no faces".into()));
        }
        if let Some(bad) = faces.iter().flatten().find(|&&i| i >= vertices.len()) {
            return Err(Error::MeshFormat(format!("face index {bad} out of range")));
        }
        let signed_volume: f64 = faces
            .iter()
            .map(|&[a, b, c]| dot(vertices[a], cross(vertices[b], vertices[c])) / 6.0)
            .sum();
        if signed_volume < 0.0 {
            for f in &mut faces {
                f.swap(1, 2);
            }
        }

        let mut nodes = Vec::with_capacity(faces.len());
        let mut normals = Vec::with_capacity(faces.len());
        let mut weights = Vec::with_capacity(faces.len());
        let mut max_edge: f64 = 0.0;
        for &[a, b, c] in &faces {
            let (pa, pb, pc) = (vertices[a], vertices[b], vertices[c]);
            let n = cross(sub3(pb, pa), sub3(pc, pa));
            let area2 = norm3(n);
            if area2 == 0.0 {
                return Err(Error::MeshFormat("degenerate triangle".into()));
            }
            nodes.push(scale(add(add(pa, pb), pc), 1.0 / 3.0));
            normals.push(scale(n, 1.0 / area2));
            weights.push(0.5 * area2);
            for (p, q) in [(pa, pb), (pb, pc), (pc, pa)] {
                max_edge = max_edge.max(norm3(sub3(p, q)));
            }
        }
        let total: f64 = weights.iter().sum();
        let centroid = nodes
            .iter()
            .zip(&weights)
            .fold([0.0; 3], |acc, (p, w)| add(acc, scale(*p, w / total)));
        let enclosing_radius =
            nodes.iter().map(|p| norm3(sub3(*p, centroid))).fold(0.0, f64::max);
        Ok(Self {
            vertices,
            faces,
            nodes,
            normals,
            weights,
            centroid,
            enclosing_radius,
            max_edge,
            level: None,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Normal at node `i` as a pure-vector quaternion.
    pub fn normal(&self, i: usize) -> ComplexQuaternion {
        ComplexQuaternion::from_point(self.normals[i])
    }

    pub fn total_area(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Characteristic panel size `h = √(area / panels)`.
    pub fn mesh_size(&self) -> f64 {
        (self.total_area() / self.len() as f64).sqrt()
    }

    /// `Σ w_i n_i`, which vanishes for a closed surface.
    pub fn vector_area(&self) -> Point {
        self.normals
            .iter()
            .zip(&self.weights)
            .fold([0.0; 3], |acc, (n, w)| add(acc, scale(*n, *w)))
    }

    /// Distance from `x` to the nearest quadrature node or vertex.
    pub fn distance_to(&self, x: Point) -> f64 {
        self.nodes
            .iter()
            .chain(&self.vertices)
            .map(|p| norm3(sub3(x, *p)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the surface around `x`: 1 inside, 0 outside.
    pub fn winding_number(&self, x: Point) -> f64 {
        let total: f64 = self
            .faces
            .iter()
            .map(|&[a, b, c]| {
                solid_angle(sub3(self.vertices[a], x), sub3(self.vertices[b], x), sub3(self.vertices[c], x))
            })
            .sum();
        total / (4.0 * std::f64::consts::PI)
    }

    pub fn contains(&self, x: Point) -> bool {
        self.winding_number(x) > 0.5
    }

    /// For each node `i`, the index of the node at its mirror image under `x3 -> -x3`.
    pub fn reflection_permutation(&self) -> Result<Vec<usize>> {
        let tol = 1e-9 * self.enclosing_radius.max(1.0);
        let key = |p: Point| {
            let q = 1.0 / (1e-6 * self.enclosing_radius.max(1.0));
            [(p[0] * q).round() as i64, (p[1] * q).round() as i64, (p[2] * q).round() as i64]
        };
        let mut index: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        for (i, p) in self.nodes.iter().enumerate() {
            index.entry(key(*p)).or_default().push(i);
        }
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mirror = reflect_x3(*p);
                let k = key(mirror);
                let mut candidates = Vec::new();
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for dz in -1..=1 {
                            if let Some(v) = index.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                                candidates.extend_from_slice(v);
                            }
                        }
                    }
                }
                candidates
                    .into_iter()
                    .find(|&j| norm3(sub3(self.nodes[j], mirror)) <= tol)
                    .ok_or(Error::DomainNotReflectionSymmetric { node: i })
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.vertices.len(), self.faces.len());
        for v in &self.vertices {
            let _ = writeln!(s, "{:e} {:e} {:e}", v[0], v[1], v[2]);
        }
        for f in &self.faces {
            let _ = writeln!(s, "{} {} {}", f[0], f[1], f[2]);
        }
        s
    }

    /// Parses the text format into a flat-triangle mesh.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::MeshFormat("empty input".into()))?;
        let counts: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::MeshFormat(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        let [vcount, fcount] = counts[..] else {
            return Err(Error::MeshFormat(format!("header must be `vcount fcount`, got `{header}`")));
        };
        let mut vertices = Vec::with_capacity(vcount);
        for _ in 0..vcount {
            let line = lines.next().ok_or_else(|| Error::MeshFormat("missing vertex line".into()))?;
            vertices.push(parse_triple::<f64>(line)?);
        }
        let mut faces = Vec::with_capacity(fcount);
        for _ in 0..fcount {
            let line = lines.next().ok_or_else(|| Error::MeshFormat("missing face line".into()))?;
            faces.push(parse_triple::<usize>(line)?);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::MeshFormat(format!("trailing content `{extra}`")));
        }
        Self::from_triangles(vertices, faces)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

fn parse_triple<T: std::str::FromStr>(line: &str) -> Result<[T; 3]> {
    let parts: Vec<T> = line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::MeshFormat(format!("bad value in `{line}`"))))
        .collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|_| Error::MeshFormat(format!("expected three values in `{line}`")))
}

/// `Σ w_i integrand(i)`, summed in fixed-size chunks so the result does not
/// depend on thread scheduling.
pub fn surface_integrate<F>(mesh: &SurfaceMesh, integrand: F) -> ComplexQuaternion
where
    F: Fn(usize) -> ComplexQuaternion + Sync,
{
    let n = mesh.len();
    let partials: Vec<ComplexQuaternion> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).map(|i| integrand(i) * mesh.weights[i]).sum()
        })
        .collect();
    partials.into_iter().sum()
}

/// Real-valued counterpart of [`surface_integrate`].
pub fn surface_integrate_real<F>(mesh: &SurfaceMesh, integrand: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let n = mesh.len();
    let partials: Vec<f64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).map(|i| integrand(i) * mesh.weights[i]).sum()
        })
        .collect();
    partials.into_iter().sum()
}

/// `∫_Γ |f|_c² dΓ`
pub fn surface_l2_c_norm_sq(mesh: &SurfaceMesh, f: &QuatField) -> f64 {
    surface_integrate_real(mesh, |i| f.eval(mesh.nodes[i]).modulus_c_sq())
}

/// `(∫_Γ |f|_c² dΓ)^{1/2}`
pub fn surface_l2_c_norm(mesh: &SurfaceMesh, f: &QuatField) -> f64 {
    surface_l2_c_norm_sq(mesh, f).sqrt()
}

/// Volume quadrature points with uniform cell weights.
#[derive(Clone, Debug, PartialEq)]
pub struct BallGrid {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub spacing: f64,
}

impl BallGrid {
    pub fn volume(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Cell centres of a cubic grid of the given spacing, symmetric about the
/// origin, that lie inside the ball `|x| < r_outer` and outside `exclusion`.
pub fn shell_grid(r_outer: f64, exclusion: Option<&SurfaceMesh>, spacing: f64) -> BallGrid {
    assert!(spacing > 0.0 && r_outer > 0.0);
    let n = (r_outer / spacing).ceil() as i64;
    let axis: Vec<f64> = (-n..n).map(|k| (k as f64 + 0.5) * spacing).collect();
    let mut candidates: Vec<Point> = Vec::new();
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                if norm3([x, y, z]) < r_outer {
                    candidates.push([x, y, z]);
                }
            }
        }
    }
    let points: Vec<Point> = match exclusion {
        None => candidates,
        Some(mesh) => {
            let keep: Vec<bool> = candidates.par_iter().map(|p| !mesh.contains(*p)).collect();
            candidates.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
        }
    };
    let w = spacing * spacing * spacing;
    BallGrid { weights: vec![w; points.len()], points, spacing }
}

/// `Σ w_i integrand(points[i])` over a volume grid, deterministic like [`surface_integrate`].
pub fn volume_integrate<F>(grid: &BallGrid, integrand: F) -> ComplexQuaternion
where
    F: Fn(Point) -> ComplexQuaternion + Sync,
{
    let n = grid.len();
    let partials: Vec<ComplexQuaternion> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).map(|i| integrand(grid.points[i]) * grid.weights[i]).sum()
        })
        .collect();
    partials.into_iter().sum()
}
