use crate::error::{Error, Result};

/// Spatial point. One-dimensional meshes use the first coordinate and keep
/// the second at `0`.
pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// The interval `(a, b)`.
    Interval { a: f64, b: f64 },
    /// The unit square `(0, 1) × (0, 1)`.
    UnitSquare,
}

impl Domain {
    pub fn dimension(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::UnitSquare => 2,
        }
    }

    /// Structured quasi-uniform mesh with `divisions` cells per direction.
    pub fn mesh(&self, divisions: usize) -> Result<SpatialMesh> {
        match *self {
            Domain::Interval { a, b } => SpatialMesh::interval(a, b, divisions),
            Domain::UnitSquare => SpatialMesh::unit_square(divisions),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cells {
    Intervals(Vec<[usize; 2]>),
    Triangles(Vec<[usize; 3]>),
}

/// Geometry of one P1 element: vertex ids, coordinates, measure and the
/// (constant) gradients of its local hat functions. Intervals fill the
/// first two slots only.
#[derive(Debug, Clone, Copy)]
pub struct Element {
    pub vertices: [usize; 3],
    pub count: usize,
    pub coords: [Point; 3],
    pub measure: f64,
    pub grads: [Point; 3],
}

impl Element {
    /// Physical point with barycentric coordinates `bary`.
    #[inline]
    pub fn point(&self, bary: &[f64; 3]) -> Point {
        let mut p = [0.0; 2];
        for a in 0..self.count {
            p[0] += bary[a] * self.coords[a][0];
            p[1] += bary[a] * self.coords[a][1];
        }
        p
    }
}

/// Conforming P1 mesh of an interval or of the unit square, with the
/// interior vertices numbered `0..M` as degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialMesh {
    domain: Domain,
    divisions: usize,
    vertices: Vec<Point>,
    cells: Cells,
    boundary: Vec<bool>,
    dof_of_vertex: Vec<Option<usize>>,
    vertex_of_dof: Vec<usize>,
}

impl SpatialMesh {
    /// Uniform partition of `(a, b)` into `divisions` subintervals.
    pub fn interval(a: f64, b: f64, divisions: usize) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid("domain", format!("need a < b, got ({a}, {b})")));
        }
        if divisions < 2 {
            return Err(Error::invalid("Ms", format!("must be at least 2, got {divisions}")));
        }
        let h = (b - a) / divisions as f64;
        let mut vertices: Vec<Point> = (0..=divisions).map(|i| [a + i as f64 * h, 0.0]).collect();
        vertices[divisions][0] = b;
        let cells = Cells::Intervals((0..divisions).map(|i| [i, i + 1]).collect());
        let boundary = (0..=divisions).map(|i| i == 0 || i == divisions).collect();
        Ok(Self::finish(Domain::Interval { a, b }, divisions, vertices, cells, boundary))
    }

    /// Unit square cut into `divisions²` cells, each split into two right
    /// triangles along the diagonal from its lower-left to upper-right corner.
    pub fn unit_square(divisions: usize) -> Result<Self> {
        if divisions < 2 {
            return Err(Error::invalid("Ms", format!("must be at least 2, got {divisions}")));
        }
        let m = divisions;
        let h = 1.0 / m as f64;
        let id = |i: usize, j: usize| j * (m + 1) + i;
        let coord = |i: usize| if i == m { 1.0 } else { i as f64 * h };
        let mut vertices = Vec::with_capacity((m + 1) * (m + 1));
        let mut boundary = Vec::with_capacity((m + 1) * (m + 1));
        for j in 0..=m {
            for i in 0..=m {
                vertices.push([coord(i), coord(j)]);
                boundary.push(i == 0 || j == 0 || i == m || j == m);
            }
        }
        let mut tris = Vec::with_capacity(2 * m * m);
        for j in 0..m {
            for i in 0..m {
                tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        Ok(Self::finish(Domain::UnitSquare, m, vertices, Cells::Triangles(tris), boundary))
    }

    fn finish(domain: Domain, divisions: usize, vertices: Vec<Point>, cells: Cells, boundary: Vec<bool>) -> Self {
        let mut dof_of_vertex = vec![None; vertices.len()];
        let mut vertex_of_dof = Vec::new();
        for (v, &on_boundary) in boundary.iter().enumerate() {
            if !on_boundary {
                dof_of_vertex[v] = Some(vertex_of_dof.len());
                vertex_of_dof.push(v);
            }
        }
        SpatialMesh {
            domain,
            divisions,
            vertices,
            cells,
            boundary,
            dof_of_vertex,
            vertex_of_dof,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    /// Cells per direction (`Mₛ`).
    pub fn divisions(&self) -> usize {
        self.divisions
    }

    /// Mesh size: cell edge length along a coordinate direction.
    pub fn h(&self) -> f64 {
        match self.domain {
            Domain::Interval { a, b } => (b - a) / self.divisions as f64,
            Domain::UnitSquare => 1.0 / self.divisions as f64,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &Cells {
        &self.cells
    }

    pub fn is_boundary(&self, vertex: usize) -> bool {
        self.boundary[vertex]
    }

    /// Number of interior unknowns `M`.
    pub fn num_dofs(&self) -> usize {
        self.vertex_of_dof.len()
    }

    pub fn dof(&self, vertex: usize) -> Option<usize> {
        self.dof_of_vertex[vertex]
    }

    pub fn dof_vertex(&self, dof: usize) -> usize {
        self.vertex_of_dof[dof]
    }

    pub fn num_elements(&self) -> usize {
        match &self.cells {
            Cells::Intervals(c) => c.len(),
            Cells::Triangles(c) => c.len(),
        }
    }

    pub fn element(&self, e: usize) -> Element {
        match &self.cells {
            Cells::Intervals(c) => {
                let [i, j] = c[e];
                let (x0, x1) = (self.vertices[i][0], self.vertices[j][0]);
                let len = x1 - x0;
                Element {
                    vertices: [i, j, usize::MAX],
                    count: 2,
                    coords: [self.vertices[i], self.vertices[j], [0.0; 2]],
                    measure: len,
                    grads: [[-1.0 / len, 0.0], [1.0 / len, 0.0], [0.0; 2]],
                }
            }
            Cells::Triangles(c) => {
                let [i, j, k] = c[e];
                let (p0, p1, p2) = (self.vertices[i], self.vertices[j], self.vertices[k]);
                let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
                let inv = 1.0 / det;
                // ∇λ_a = rot(p_{a+2} − p_{a+1}) / det
                let grad = |a: Point, b: Point| [(a[1] - b[1]) * inv, (b[0] - a[0]) * inv];
                Element {
                    vertices: [i, j, k],
                    count: 3,
                    coords: [p0, p1, p2],
                    measure: 0.5 * det,
                    grads: [grad(p1, p2), grad(p2, p0), grad(p0, p1)],
                }
            }
        }
    }

    /// Element containing `p` and the barycentric coordinates of `p` in it,
    /// or `None` when `p` lies outside the domain.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        let m = self.divisions;
        let tol = 1e-12;
        match self.domain {
            Domain::Interval { a, b } => {
                if p[0] < a - tol * (b - a) || p[0] > b + tol * (b - a) {
                    return None;
                }
                let s = ((p[0] - a) / (b - a) * m as f64).clamp(0.0, m as f64);
                let e = (s.floor() as usize).min(m - 1);
                let local = s - e as f64;
                Some((e, [1.0 - local, local, 0.0]))
            }
            Domain::UnitSquare => {
                if p.iter().any(|&c| !(-tol..=1.0 + tol).contains(&c)) {
                    return None;
                }
                let sx = (p[0] * m as f64).clamp(0.0, m as f64);
                let sy = (p[1] * m as f64).clamp(0.0, m as f64);
                let i = (sx.floor() as usize).min(m - 1);
                let j = (sy.floor() as usize).min(m - 1);
                let (lx, ly) = (sx - i as f64, sy - j as f64);
                let cell = 2 * (j * m + i);
                if ly <= lx {
                    // (0,0), (1,0), (1,1)
                    Some((cell, [1.0 - lx, lx - ly, ly]))
                } else {
                    // (0,0), (1,1), (0,1)
                    Some((cell + 1, [1.0 - ly, lx, ly - lx]))
                }
            }
        }
    }
}
