use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{make_cube, Graph};

use super::{flip_graph, CubeWitness, FlipError, FlipStructure, SMALL_PART_THRESHOLD};

/// How cube vertices are distributed over the parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartLayout {
    /// Uniform random assignment with every part of at least `min_part` vertices.
    Random,
    /// Part `t` holds the slabs `i` with `(i - 1) * k / N == t`.
    Slabs,
    /// Part `(i + j + k) mod 2`; needs `k = 2`.
    Parity,
}

#[derive(Debug, Clone)]
pub struct FlippedCubeOptions {
    pub side: usize,
    pub k: usize,
    pub layout: PartLayout,
    pub min_part: usize,
    /// Parts `0..isolated` get no pattern edges and no loops.
    pub isolated: usize,
    pub edge_probability: f64,
    pub loop_probability: f64,
    /// Guarantees at least one pattern edge or loop among non-isolated parts.
    pub force_edge: bool,
}

impl FlippedCubeOptions {
    pub fn new(side: usize, k: usize) -> Self {
        FlippedCubeOptions {
            side,
            k,
            layout: PartLayout::Random,
            min_part: SMALL_PART_THRESHOLD + 1,
            isolated: 0,
            edge_probability: 0.5,
            loop_probability: 0.5,
            force_edge: true,
        }
    }

    pub fn layout(mut self, layout: PartLayout) -> Self {
        self.layout = layout;
        self
    }

    pub fn isolated(mut self, isolated: usize) -> Self {
        self.isolated = isolated;
        self
    }
}

/// A flip structure whose flip is a witnessed cube.
#[derive(Debug, Clone)]
pub struct FlippedCube {
    pub structure: FlipStructure,
    pub witness: CubeWitness,
}

/// Draws `(P, H)` and sets `G := F(Q_N, P, H)`, so that `F(G, P, H) = Q_N`
/// by the involution.
pub fn flipped_cube(opts: &FlippedCubeOptions, seed: u64) -> Result<FlippedCube, FlipError> {
    let cube = make_cube(opts.side)?;
    let n = cube.graph.n();
    let k = opts.k.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let part_of: Vec<usize> = match opts.layout {
        PartLayout::Random => {
            let floor = opts.min_part.min(n / k);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut part_of = vec![0; n];
            for (t, &v) in order.iter().enumerate() {
                part_of[v] = if t < floor * k { t % k } else { rng.gen_range(0..k) };
            }
            part_of
        }
        PartLayout::Slabs => cube.coords.iter().map(|c| (c.i - 1) * k / opts.side).collect(),
        PartLayout::Parity => cube.coords.iter().map(|c| (c.i + c.j + c.k) % 2).collect(),
    };
    let k = part_of.iter().max().map_or(k, |&m| k.max(m + 1));
    let active: Vec<usize> = (opts.isolated.min(k)..k).collect();
    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for (a, &i) in active.iter().enumerate() {
        if rng.gen_bool(opts.loop_probability) {
            loops.push(i);
        }
        for &j in &active[a + 1..] {
            if rng.gen_bool(opts.edge_probability) {
                edges.push((i, j));
            }
        }
    }
    if opts.force_edge && edges.is_empty() && loops.is_empty() {
        match active.as_slice() {
            [] => {}
            [i] => loops.push(*i),
            [i, j, ..] => edges.push((*i, *j)),
        }
    }
    let pattern = Graph::pattern(k, edges, loops)?;
    let graph = flip_graph(&cube.graph, &part_of, &pattern);
    Ok(FlippedCube {
        structure: FlipStructure::new(graph, part_of, pattern)?,
        witness: CubeWitness::new(opts.side, cube.coords),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flip::apply_flip;

    #[test]
    fn involution_gives_the_cube() {
        for seed in 0..10 {
            let fc = flipped_cube(&FlippedCubeOptions::new(4, 3), seed).unwrap();
            assert!(fc.witness.verify(&apply_flip(&fc.structure)).passed());
            assert!(fc.structure.part_sizes().iter().all(|&s| s > SMALL_PART_THRESHOLD));
        }
    }

    #[test]
    fn deterministic_and_layouts() {
        let opts = FlippedCubeOptions::new(4, 2);
        let a = flipped_cube(&opts, 7).unwrap();
        let b = flipped_cube(&opts, 7).unwrap();
        assert_eq!(a.structure, b.structure);
        let parity = flipped_cube(&opts.clone().layout(PartLayout::Parity), 0).unwrap();
        assert_eq!(parity.structure.part_sizes(), vec![32, 32]);
        let slabs = flipped_cube(&FlippedCubeOptions::new(5, 5).layout(PartLayout::Slabs).isolated(2), 3).unwrap();
        assert_eq!(slabs.structure.part_sizes(), vec![25; 5]);
        assert_eq!(
            slabs.structure.pattern().degree(0) + slabs.structure.pattern().degree(1),
            0
        );
    }
}
