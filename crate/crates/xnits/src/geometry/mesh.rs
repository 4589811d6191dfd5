use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dist, tri_signed_area, Point};
use crate::error::{Error, Result};

/// Unstructured simplex mesh: segments in 1D, linear triangles in 2D.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub dimension: usize,
    pub node_coords: Vec<Point>,
    /// Node indices per element: 2 for segments, 3 for triangles (positive orientation).
    pub elements: Vec<Vec<usize>>,
    /// Boundary facets with a tag: a single node in 1D, an edge in 2D.
    pub boundary_facets: Vec<(Vec<usize>, String)>,
}

/// Axis-aligned box the structured meshes fill.
#[derive(Debug, Clone, Copy)]
pub struct Domain {
    pub min: Point,
    pub max: Point,
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Self {
        Domain {
            min: [a, 0.0],
            max: [b, 0.0],
        }
    }
    pub fn rect(min: Point, max: Point) -> Self {
        Domain { min, max }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Segment,
    TriangleRegular,
    /// Regular connectivity with seeded interior-node perturbation (<= 0.25 h).
    TriangleIrregular {
        seed: u64,
    },
}

impl Mesh {
    /// Longest element edge.
    pub fn mesh_size(&self) -> f64 {
        let mut h: f64 = 0.0;
        for el in &self.elements {
            for i in 0..el.len() {
                for j in (i + 1)..el.len() {
                    h = h.max(dist(self.node_coords[el[i]], self.node_coords[el[j]]));
                }
            }
        }
        h
    }

    pub fn element_measure(&self, e: usize) -> f64 {
        let el = &self.elements[e];
        match el.len() {
            2 => dist(self.node_coords[el[0]], self.node_coords[el[1]]),
            3 => tri_signed_area(
                self.node_coords[el[0]],
                self.node_coords[el[1]],
                self.node_coords[el[2]],
            ),
            _ => unreachable!("simplex meshes only"),
        }
    }

    pub fn total_measure(&self) -> f64 {
        (0..self.elements.len())
            .map(|e| self.element_measure(e))
            .sum()
    }

    fn validate(&self) -> Result<()> {
        let n = self.node_coords.len();
        for (e, el) in self.elements.iter().enumerate() {
            if el.iter().any(|&i| i >= n) {
                return Err(Error::Geometry(format!(
                    "element {e} has out-of-range node"
                )));
            }
            if el.len() == 3 && self.element_measure(e) <= 0.0 {
                return Err(Error::Geometry(format!(
                    "element {e} has non-positive area"
                )));
            }
        }
        Ok(())
    }

    /// Mesh nodes lying on the boundary facets carrying `tag`.
    pub fn tagged_nodes(&self, tag: &str) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .boundary_facets
            .iter()
            .filter(|(_, t)| t == tag)
            .flat_map(|(nodes, _)| nodes.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Build a structured mesh on an axis-aligned box with target element size `h`.
///
/// Segment meshes subdivide the interval; triangle meshes split each grid cell
/// along a fixed diagonal. Irregular grids perturb interior nodes with a
/// seeded generator so repeated runs are bit-identical.
pub fn build_structured_mesh(domain: Domain, h: f64, kind: GridKind) -> Result<Mesh> {
    if h <= 0.0 {
        return Err(Error::Geometry("target size h must be positive".into()));
    }
    let lx = domain.max[0] - domain.min[0];
    match kind {
        GridKind::Segment => {
            if lx <= 0.0 {
                return Err(Error::Geometry("degenerate interval".into()));
            }
            let n = (lx / h).ceil().max(1.0) as usize;
            let dx = lx / n as f64;
            let node_coords: Vec<Point> = (0..=n)
                .map(|i| [domain.min[0] + i as f64 * dx, 0.0])
                .collect();
            let elements = (0..n).map(|i| vec![i, i + 1]).collect();
            let boundary_facets = vec![
                (vec![0], "left".to_string()),
                (vec![n], "right".to_string()),
            ];
            let mesh = Mesh {
                dimension: 1,
                node_coords,
                elements,
                boundary_facets,
            };
            mesh.validate()?;
            Ok(mesh)
        }
        GridKind::TriangleRegular | GridKind::TriangleIrregular { .. } => {
            let ly = domain.max[1] - domain.min[1];
            if lx <= 0.0 || ly <= 0.0 {
                return Err(Error::Geometry("degenerate box".into()));
            }
            let nx = (lx / h).ceil().max(1.0) as usize;
            let ny = (ly / h).ceil().max(1.0) as usize;
            let (dx, dy) = (lx / nx as f64, ly / ny as f64);
            let id = |i: usize, j: usize| j * (nx + 1) + i;
            let mut node_coords = Vec::with_capacity((nx + 1) * (ny + 1));
            for j in 0..=ny {
                for i in 0..=nx {
                    node_coords
                        .push([domain.min[0] + i as f64 * dx, domain.min[1] + j as f64 * dy]);
                }
            }
            if let GridKind::TriangleIrregular { seed } = kind {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let amp = 0.25 * dx.min(dy);
                for j in 1..ny {
                    for i in 1..nx {
                        let p = &mut node_coords[id(i, j)];
                        p[0] += rng.gen_range(-amp..amp);
                        p[1] += rng.gen_range(-amp..amp);
                    }
                }
            }
            let mut elements = Vec::with_capacity(2 * nx * ny);
            for j in 0..ny {
                for i in 0..nx {
                    let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
                    elements.push(vec![a, b, c]);
                    elements.push(vec![a, c, d]);
                }
            }
            let mut boundary_facets = Vec::new();
            for i in 0..nx {
                boundary_facets.push((vec![id(i, 0), id(i + 1, 0)], "bottom".to_string()));
                boundary_facets.push((vec![id(i + 1, ny), id(i, ny)], "top".to_string()));
            }
            for j in 0..ny {
                boundary_facets.push((vec![id(nx, j), id(nx, j + 1)], "right".to_string()));
                boundary_facets.push((vec![id(0, j + 1), id(0, j)], "left".to_string()));
            }
            let mesh = Mesh {
                dimension: 2,
                node_coords,
                elements,
                boundary_facets,
            };
            mesh.validate()?;
            Ok(mesh)
        }
    }
}

/// Read the plain-text mesh format: `dim n_nodes n_elems`, node lines
/// `id x [y]`, element lines `id n1 n2 [n3]`, then a `boundary` section of
/// `facet-nodes... tag` lines. All ids 0-based.
pub fn read_mesh_text(path: &Path) -> Result<Mesh> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::MeshFormat("empty file".into()))?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::MeshFormat(format!("bad header `{header}`")))
        })
        .collect::<Result<_>>()?;
    if head.len() != 3 || (head[0] != 1 && head[0] != 2) {
        return Err(Error::MeshFormat(format!("bad header `{header}`")));
    }
    let (dim, n_nodes, n_elems) = (head[0], head[1], head[2]);
    let mut node_coords = vec![[0.0, 0.0]; n_nodes];
    for _ in 0..n_nodes {
        let line = lines
            .next()
            .ok_or_else(|| Error::MeshFormat("missing node line".into()))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 1 + dim {
            return Err(Error::MeshFormat(format!("bad node line `{line}`")));
        }
        let id: usize = toks[0]
            .parse()
            .map_err(|_| Error::MeshFormat(format!("bad node id in `{line}`")))?;
        let mut p = [0.0, 0.0];
        for d in 0..dim {
            p[d] = toks[1 + d]
                .parse()
                .map_err(|_| Error::MeshFormat(format!("bad coordinate in `{line}`")))?;
        }
        if id >= n_nodes {
            return Err(Error::MeshFormat(format!("node id {id} out of range")));
        }
        node_coords[id] = p;
    }
    let nodes_per_elem = dim + 1;
    let mut elements = vec![Vec::new(); n_elems];
    for _ in 0..n_elems {
        let line = lines
            .next()
            .ok_or_else(|| Error::MeshFormat("missing element line".into()))?;
        let toks: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::MeshFormat(format!("bad element line `{line}`")))
            })
            .collect::<Result<_>>()?;
        if toks.len() != 1 + nodes_per_elem {
            return Err(Error::MeshFormat(format!("bad element line `{line}`")));
        }
        elements[toks[0]] = toks[1..].to_vec();
    }
    let mut boundary_facets = Vec::new();
    if let Some(marker) = lines.next() {
        if marker != "boundary" {
            return Err(Error::MeshFormat(format!(
                "expected `boundary`, got `{marker}`"
            )));
        }
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 2 {
                return Err(Error::MeshFormat(format!("bad boundary line `{line}`")));
            }
            let nodes: Vec<usize> = toks[..toks.len() - 1]
                .iter()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::MeshFormat(format!("bad boundary line `{line}`")))
                })
                .collect::<Result<_>>()?;
            boundary_facets.push((nodes, toks[toks.len() - 1].to_string()));
        }
    }
    let mesh = Mesh {
        dimension: dim,
        node_coords,
        elements,
        boundary_facets,
    };
    mesh.validate()?;
    Ok(mesh)
}

pub fn write_mesh_text(mesh: &Mesh, path: &Path) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    writeln!(
        out,
        "{} {} {}",
        mesh.dimension,
        mesh.node_coords.len(),
        mesh.elements.len()
    )?;
    for (i, p) in mesh.node_coords.iter().enumerate() {
        if mesh.dimension == 1 {
            writeln!(out, "{} {}", i, p[0])?;
        } else {
            writeln!(out, "{} {} {}", i, p[0], p[1])?;
        }
    }
    for (e, el) in mesh.elements.iter().enumerate() {
        let ids: Vec<String> = el.iter().map(|n| n.to_string()).collect();
        writeln!(out, "{} {}", e, ids.join(" "))?;
    }
    writeln!(out, "boundary")?;
    for (nodes, tag) in &mesh.boundary_facets {
        let ids: Vec<String> = nodes.iter().map(|n| n.to_string()).collect();
        writeln!(out, "{} {}", ids.join(" "), tag)?;
    }
    Ok(())
}
