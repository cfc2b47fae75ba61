//! Graph generators: Erdős–Rényi and geometric random graphs plus the named
//! deterministic families (path, cycle, complete, star, grid).
//!
//! Random generators are driven by PCG-64 seeded from a `u64`, with uniform
//! variates drawn through an explicit 53-bit conversion, so identical
//! `(parameters, seed)` always produce identical edge sets.

use super::Graph;
use crate::error::Error;
use crate::Result;
use rand::RngCore;
use rand_pcg::Pcg64;
use rand::SeedableRng;

/// Uniform draw in `[0, 1)` from the top 53 bits of the stream.
fn unit_f64(rng: &mut Pcg64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

impl Graph {
    /// Erdős–Rényi G(n, p): each of the C(n,2) edges is present
    /// independently with probability `p`.
    pub fn generate_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("edge probability {p} outside [0, 1]")));
        }
        let mut rng = Pcg64::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if unit_f64(&mut rng) < p {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges)
    }

    /// Geometric random graph: `n` points uniform on the unit square, an
    /// edge whenever the Euclidean distance is at most `r`.
    pub fn generate_geometric(n: usize, r: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if r <= 0.0 {
            return Err(Error::Parameter(format!("radius {r} must be positive")));
        }
        let mut rng = Pcg64::seed_from_u64(seed);
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let x = unit_f64(&mut rng);
                let y = unit_f64(&mut rng);
                (x, y)
            })
            .collect();
        let r2 = r * r;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let dx = points[u].0 - points[v].0;
                let dy = points[u].1 - points[v].1;
                if dx * dx + dy * dy <= r2 {
                    edges.push((u as u32, v as u32));
                }
            }
        }
        Graph::from_edges(n, &edges)
    }

    /// Path P_n with vertices numbered along the path.
    pub fn generate_path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let edges: Vec<(u32, u32)> = (1..n as u32).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Cycle C_n (n >= 3 gives the proper cycle; n <= 2 degrades to a path).
    pub fn generate_cycle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut edges: Vec<(u32, u32)> = (1..n as u32).map(|v| (v - 1, v)).collect();
        if n > 2 {
            edges.push((n as u32 - 1, 0));
        }
        Graph::from_edges(n, &edges)
    }

    /// Complete graph K_n.
    pub fn generate_complete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges)
    }

    /// Star K_{1,leaves}: vertex 0 is the center.
    pub fn generate_star(leaves: usize) -> Result<Self> {
        if leaves == 0 {
            return Err(Error::Parameter("star needs at least one leaf".into()));
        }
        let edges: Vec<(u32, u32)> = (1..=leaves as u32).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    /// rows x cols grid in row-major numbering.
    pub fn generate_grid(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyGraph);
        }
        let at = |r: usize, c: usize| (r * cols + c) as u32;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((at(r, c), at(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((at(r, c), at(r + 1, c)));
                }
            }
        }
        Graph::from_edges(rows * cols, &edges)
    }
}

/// Parsed generator specification, e.g. `path:9`, `grid:10x10`,
/// `er:n=9,p=0.25,seed=7`, `geo:n=15,r=0.45,seed=3`.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Star(usize),
    Grid(usize, usize),
    ErdosRenyi { n: usize, p: f64, seed: u64 },
    Geometric { n: usize, r: f64, seed: u64 },
}

impl GeneratorSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parameter(format!("generator spec '{spec}': {msg}"));
        let (family, rest) = spec
            .split_once(':')
            .ok_or_else(|| bad("expected 'family:parameters'"))?;
        match family {
            "path" | "cycle" | "complete" | "star" => {
                let n: usize = rest.parse().map_err(|_| bad("size must be an integer"))?;
                Ok(match family {
                    "path" => GeneratorSpec::Path(n),
                    "cycle" => GeneratorSpec::Cycle(n),
                    "complete" => GeneratorSpec::Complete(n),
                    _ => GeneratorSpec::Star(n),
                })
            }
            "grid" => {
                let (r, c) = rest
                    .split_once('x')
                    .ok_or_else(|| bad("grid wants ROWSxCOLS"))?;
                let rows = r.parse().map_err(|_| bad("bad row count"))?;
                let cols = c.parse().map_err(|_| bad("bad column count"))?;
                Ok(GeneratorSpec::Grid(rows, cols))
            }
            "er" | "geo" => {
                let mut n = None;
                let mut value = None;
                let mut seed = 0u64;
                for part in rest.split(',') {
                    let (k, v) = part
                        .split_once('=')
                        .ok_or_else(|| bad("random specs want key=value pairs"))?;
                    match k {
                        "n" => n = Some(v.parse().map_err(|_| bad("bad n"))?),
                        "p" | "r" => value = Some(v.parse().map_err(|_| bad("bad p/r"))?),
                        "seed" => seed = v.parse().map_err(|_| bad("bad seed"))?,
                        _ => return Err(bad(&format!("unknown key '{k}'"))),
                    }
                }
                let n = n.ok_or_else(|| bad("missing n"))?;
                let value = value.ok_or_else(|| bad("missing p (er) or r (geo)"))?;
                Ok(if family == "er" {
                    GeneratorSpec::ErdosRenyi { n, p: value, seed }
                } else {
                    GeneratorSpec::Geometric { n, r: value, seed }
                })
            }
            _ => Err(bad("unknown family")),
        }
    }

    pub fn build(&self) -> Result<Graph> {
        match *self {
            GeneratorSpec::Path(n) => Graph::generate_path(n),
            GeneratorSpec::Cycle(n) => Graph::generate_cycle(n),
            GeneratorSpec::Complete(n) => Graph::generate_complete(n),
            GeneratorSpec::Star(n) => Graph::generate_star(n),
            GeneratorSpec::Grid(r, c) => Graph::generate_grid(r, c),
            GeneratorSpec::ErdosRenyi { n, p, seed } => Graph::generate_erdos_renyi(n, p, seed),
            GeneratorSpec::Geometric { n, r, seed } => Graph::generate_geometric(n, r, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        let empty = Graph::generate_erdos_renyi(9, 0.0, 1).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = Graph::generate_erdos_renyi(9, 1.0, 1).unwrap();
        assert_eq!(full.edge_count(), 36);
    }

    #[test]
    fn er_mean_edges_near_expectation() {
        // E[m] = p * C(9,2) = 12 at p = 1/3; SE = sqrt(1000 * 36 * p(1-p)) / 1000.
        let p = 3.0 / 9.0;
        let total: usize = (0..1000)
            .map(|s| Graph::generate_erdos_renyi(9, p, s).unwrap().edge_count())
            .sum();
        let mean = total as f64 / 1000.0;
        let se = (36.0 * p * (1.0 - p) / 1000.0).sqrt();
        assert!((mean - 12.0).abs() < 3.0 * se, "mean {mean} too far from 12");
    }

    #[test]
    fn generators_are_reproducible() {
        let a = Graph::generate_erdos_renyi(20, 0.3, 77).unwrap();
        let b = Graph::generate_erdos_renyi(20, 0.3, 77).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        let c = Graph::generate_geometric(20, 0.3, 4).unwrap();
        let d = Graph::generate_geometric(20, 0.3, 4).unwrap();
        assert_eq!(c.edges().collect::<Vec<_>>(), d.edges().collect::<Vec<_>>());
    }

    #[test]
    fn geometric_large_radius_is_complete() {
        let g = Graph::generate_geometric(10, std::f64::consts::SQRT_2, 5).unwrap();
        assert_eq!(g.edge_count(), 45);
    }

    #[test]
    fn geometric_tiny_radius_is_empty() {
        let g = Graph::generate_geometric(10, 1e-9, 5).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn named_families() {
        let grid = Graph::generate_grid(50, 50).unwrap();
        assert_eq!(grid.vertex_count(), 2500);
        assert_eq!(grid.edge_count(), 4900);

        let c4 = Graph::generate_cycle(4).unwrap();
        assert!((0..4).all(|v| c4.degree(v) == 2));

        let star = Graph::generate_star(6).unwrap();
        assert_eq!(star.degree(0), 6);
        assert!((1..=6).all(|v| star.degree(v) == 1));
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(GeneratorSpec::parse("path:9").unwrap(), GeneratorSpec::Path(9));
        assert_eq!(
            GeneratorSpec::parse("grid:10x12").unwrap(),
            GeneratorSpec::Grid(10, 12)
        );
        assert_eq!(
            GeneratorSpec::parse("er:n=9,p=0.25,seed=7").unwrap(),
            GeneratorSpec::ErdosRenyi { n: 9, p: 0.25, seed: 7 }
        );
        assert!(GeneratorSpec::parse("blob:3").is_err());
    }
}
