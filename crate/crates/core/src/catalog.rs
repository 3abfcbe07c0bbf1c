//! The instance catalog: small matroids the harness sweeps.
//!
//! Four suites, each deterministic:
//!
//! * `small-uniform` — U_{r,n} for 1 <= r <= n <= 8;
//! * `small-pg` — projective geometries PG(dim, q) for (dim, q) in
//!   {(1,2), (1,3), (1,4), (2,2), (2,3), (2,4), (3,2)};
//! * `small-graphic` — cycles C_3..C_8, wheels W_3..W_6, K_4, K_5;
//! * `random-linear` — a fixed shape list of random matrices over small
//!   fields, seeded from the suite seed, so the same seed always reproduces
//!   the same instances.
//!
//! `all` concatenates the four in that order.

use crate::error::{Error, Result};
use crate::matroid::{field_from_order, LinearRep, Matroid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub matroid: Arc<Matroid>,
}

pub const SUITES: [&str; 5] =
    ["small-uniform", "small-pg", "small-graphic", "random-linear", "all"];

/// Shapes for the random-linear suite: (q, rows, cols).
const RANDOM_LINEAR_SHAPES: [(u32, usize, usize); 8] = [
    (2, 3, 9),
    (2, 4, 12),
    (2, 5, 14),
    (3, 3, 8),
    (3, 4, 10),
    (4, 3, 7),
    (4, 4, 9),
    (2, 6, 15),
];

pub fn generate(spec: &str, seed: u64) -> Result<Vec<CatalogEntry>> {
    match spec {
        "small-uniform" => small_uniform(),
        "small-pg" => small_pg(),
        "small-graphic" => small_graphic(),
        "random-linear" => random_linear(seed),
        "all" => {
            let mut out = small_uniform()?;
            out.extend(small_pg()?);
            out.extend(small_graphic()?);
            out.extend(random_linear(seed)?);
            Ok(out)
        }
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

fn entry(id: String, m: Matroid) -> CatalogEntry {
    CatalogEntry { id, matroid: Arc::new(m) }
}

fn small_uniform() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for n in 1..=8usize {
        for r in 1..=n {
            out.push(entry(format!("u-{r}-{n}"), Matroid::uniform(r, n)?));
        }
    }
    Ok(out)
}

fn small_pg() -> Result<Vec<CatalogEntry>> {
    let shapes: [(usize, u32); 7] = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (3, 2)];
    let mut out = Vec::new();
    for (dim, q) in shapes {
        out.push(entry(format!("pg-{dim}-{q}"), Matroid::pg(dim + 1, q)?));
    }
    Ok(out)
}

fn small_graphic() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for n in 3..=8usize {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        out.push(entry(format!("g-c{n}"), Matroid::graphic(n, edges)?));
    }
    for k in 3..=6usize {
        // Wheel W_k: hub 0, rim 1..=k; spokes then rim edges.
        let mut edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
        edges.extend((1..=k).map(|i| (i, i % k + 1)));
        out.push(entry(format!("g-w{k}"), Matroid::graphic(k + 1, edges)?));
    }
    out.push(entry("g-k4".into(), Matroid::graphic(4, complete_edges(4))?));
    out.push(entry("g-k5".into(), Matroid::graphic(5, complete_edges(5))?));
    Ok(out)
}

fn complete_edges(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    edges
}

fn random_linear(seed: u64) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (idx, &(q, rows, cols)) in RANDOM_LINEAR_SHAPES.iter().enumerate() {
        let sub_seed = seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(idx as u64 + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        let field = field_from_order(q)?;
        let entries: Vec<u8> =
            (0..rows * cols).map(|_| rng.gen_range(0..q) as u8).collect();
        let rep = LinearRep::new(field, rows, cols, entries)?;
        out.push(entry(format!("rl-q{q}-r{rows}-c{cols}-i{idx}"), Matroid::linear(rep)?));
    }
    Ok(out)
}
