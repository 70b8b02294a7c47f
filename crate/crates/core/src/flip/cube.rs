use std::collections::HashMap;

use crate::graph::{ball, make_cube, CubeCoord, Graph};
use crate::report::{Report, Witness};

use super::{apply_flip, substructure, unaffected_set, FlipError, FlipStructure, SMALL_PART_THRESHOLD};

/// Claims that a graph is `Q_side` with vertex `v` at `coords[v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeWitness {
    pub side: usize,
    pub coords: Vec<CubeCoord>,
}

impl CubeWitness {
    pub fn new(side: usize, coords: Vec<CubeCoord>) -> Self {
        CubeWitness { side, coords }
    }

    /// Checks that the coordinates are a bijection onto `[side]^3` and that
    /// adjacency in `g` is exactly Manhattan distance 1.
    pub fn verify(&self, g: &Graph) -> Report {
        let check = "cube-witness";
        let n = self.side.pow(3);
        if self.coords.len() != n || g.n() != n {
            return Report::fail(check, Witness::Components { count: g.n() })
                .with_note("expected_vertices", n)
                .with_note("coords", self.coords.len());
        }
        let mut seen = HashMap::with_capacity(n);
        for (v, c) in self.coords.iter().enumerate() {
            let in_range = c.as_array().iter().all(|x| (1..=self.side).contains(x));
            if !in_range {
                return Report::fail(check, Witness::Vertex { v });
            }
            if let Some(u) = seen.insert(*c, v) {
                return Report::fail(check, Witness::Pair { u, v });
            }
        }
        let expected: usize = 3 * self.side * self.side * (self.side - 1);
        for (u, v) in g.edges() {
            if self.coords[u].manhattan(&self.coords[v]) != 1 {
                return Report::fail(check, Witness::Edge { u, v });
            }
        }
        if g.edge_count() != expected {
            // some unit pair is missing; find it for the witness
            for (u, cu) in self.coords.iter().enumerate() {
                for (v, cv) in self.coords.iter().enumerate().skip(u + 1) {
                    if cu.manhattan(cv) == 1 && !g.has_edge(u, v) {
                        return Report::fail(check, Witness::Pair { u, v });
                    }
                }
            }
        }
        Report::pass(check)
    }

    /// Verifies the witness against `F(fs)`.
    pub fn require(&self, fs: &FlipStructure) -> Result<(), FlipError> {
        let report = self.verify(&apply_flip(fs));
        if report.passed() {
            Ok(())
        } else {
            Err(FlipError::NotCube(Box::new(report)))
        }
    }
}

/// A vertex set of `G` that induces `Q_side`, with its coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedCube {
    pub vertices: Vec<usize>,
    pub witness: CubeWitness,
}

impl InducedCube {
    pub fn verify(&self, g: &Graph) -> Result<Report, FlipError> {
        let sub = g.induced_subgraph(&self.vertices)?;
        Ok(self.witness.verify(&sub.graph))
    }
}

/// An induced cube of side `max(1, ⌊r/3⌋)` inside `N_r[v]`, assuming the
/// ball lies in the unaffected set of a flip structure whose flip is the
/// witnessed cube. Inside that ball `G` and the cube agree.
pub fn find_cube_in_ball(
    fs: &FlipStructure,
    witness: &CubeWitness,
    v: usize,
    r: usize,
) -> Result<InducedCube, FlipError> {
    witness.require(fs)?;
    if r > witness.side {
        return Err(FlipError::RadiusTooLarge { r, side: witness.side });
    }
    let mut unaffected = vec![false; fs.n()];
    for u in unaffected_set(fs) {
        unaffected[u] = true;
    }
    let nbhd = ball(fs.graph(), v, r);
    if let Some(&vertex) = nbhd.iter().find(|&&u| !unaffected[u]) {
        return Err(FlipError::BallAffected { vertex, r });
    }
    let m = (r / 3).max(1);
    let center = witness.coords[v].as_array();
    let start: Vec<usize> = center.iter().map(|&x| x.min(witness.side + 1 - m).max(1)).collect();
    let mut by_coord = HashMap::new();
    for (u, c) in witness.coords.iter().enumerate() {
        by_coord.insert(*c, u);
    }
    let mut picked = Vec::with_capacity(m.pow(3));
    for c in make_cube(m)?.coords {
        let shifted = CubeCoord::new(c.i + start[0] - 1, c.j + start[1] - 1, c.k + start[2] - 1);
        picked.push((by_coord[&shifted], c));
    }
    picked.sort_unstable();
    let (vertices, coords) = picked.into_iter().unzip();
    Ok(InducedCube {
        vertices,
        witness: CubeWitness::new(m, coords),
    })
}

/// The result of moving to a block of the cube that misses a part.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub structure: FlipStructure,
    pub witness: CubeWitness,
    /// Vertex of the input behind each vertex of `structure`.
    pub original: Vec<usize>,
    /// Zero-based block position `(a, b, c)`.
    pub block: [usize; 3],
}

/// Splits the witnessed `Q_{3N}` into 27 blocks `Q_N` and restricts to the
/// lexicographically first block disjoint from `V_i`.
pub fn extract_avoiding_subcube(
    fs: &FlipStructure,
    witness: &CubeWitness,
    part: usize,
) -> Result<Extraction, FlipError> {
    witness.require(fs)?;
    if witness.side % 3 != 0 {
        return Err(FlipError::SideNotDivisible(witness.side));
    }
    let size = fs.part_sizes().get(part).copied().unwrap_or(0);
    if size > SMALL_PART_THRESHOLD {
        return Err(FlipError::PartTooLarge { part, size });
    }
    let n = witness.side / 3;
    let block_of = |c: &CubeCoord| c.as_array().map(|x| (x - 1) / n);
    let mut hit = [[[false; 3]; 3]; 3];
    for v in 0..fs.n() {
        if fs.part(v) == part {
            let [a, b, c] = block_of(&witness.coords[v]);
            hit[a][b][c] = true;
        }
    }
    let block = (0..27)
        .map(|t| [t / 9, t / 3 % 3, t % 3])
        .find(|&[a, b, c]| !hit[a][b][c])
        .expect("at most 12 vertices hit at most 12 of 27 blocks");
    let original: Vec<usize> = (0..fs.n()).filter(|&v| block_of(&witness.coords[v]) == block).collect();
    let coords = original
        .iter()
        .map(|&v| {
            let c = witness.coords[v];
            CubeCoord::new(c.i - block[0] * n, c.j - block[1] * n, c.k - block[2] * n)
        })
        .collect();
    Ok(Extraction {
        structure: substructure(fs, &original)?,
        witness: CubeWitness::new(n, coords),
        original,
        block,
    })
}

/// Repeatedly extracts an avoiding block for the smallest-index non-empty
/// part of size at most the threshold, until every non-empty part is large.
/// `original` of the result maps back to the input structure.
pub fn eliminate_small_parts(fs: &FlipStructure, witness: &CubeWitness) -> Result<(Extraction, Vec<usize>), FlipError> {
    let mut current = Extraction {
        structure: fs.clone(),
        witness: witness.clone(),
        original: (0..fs.n()).collect(),
        block: [0; 3],
    };
    let mut eliminated = Vec::new();
    loop {
        let sizes = current.structure.part_sizes();
        let Some(part) = (0..sizes.len()).find(|&i| (1..=SMALL_PART_THRESHOLD).contains(&sizes[i])) else {
            return Ok((current, eliminated));
        };
        let next = extract_avoiding_subcube(&current.structure, &current.witness, part)?;
        eliminated.push(part);
        current = Extraction {
            original: next.original.iter().map(|&v| current.original[v]).collect(),
            ..next
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edgeless, make_cube};

    fn plain(side: usize, part_of: Vec<usize>, k: usize) -> (FlipStructure, CubeWitness) {
        let q = make_cube(side).unwrap();
        let fs = FlipStructure::new(q.graph, part_of, edgeless(k)).unwrap();
        (fs, CubeWitness::new(side, q.coords))
    }

    #[test]
    fn witness_verification() {
        let q = make_cube(3).unwrap();
        let w = CubeWitness::new(3, q.coords.clone());
        assert!(w.verify(&q.graph).passed());
        let mut swapped = q.coords.clone();
        swapped.swap(0, 26);
        assert!(w.verify(&crate::graph::make_diag_cube(3).unwrap().graph).failed());
        assert!(CubeWitness::new(3, swapped).verify(&q.graph).failed());
    }

    #[test]
    fn cube_in_ball() {
        let (fs, w) = plain(9, vec![0; 729], 1);
        let q = make_cube(9).unwrap();
        let center = q.index(CubeCoord::new(5, 5, 5)).unwrap();
        let found = find_cube_in_ball(&fs, &w, center, 6).unwrap();
        assert_eq!(found.witness.side, 2);
        assert!(found.verify(fs.graph()).unwrap().passed());
        let nbhd = ball(fs.graph(), center, 6);
        assert!(found.vertices.iter().all(|v| nbhd.binary_search(v).is_ok()));
        let tiny = find_cube_in_ball(&fs, &w, center, 2).unwrap();
        assert_eq!(tiny.vertices, vec![center]);
        let corner = q.index(CubeCoord::new(9, 9, 9)).unwrap();
        let c = find_cube_in_ball(&fs, &w, corner, 9).unwrap();
        assert_eq!(c.witness.side, 3);
        assert!(c.verify(fs.graph()).unwrap().passed());
        assert!(matches!(
            find_cube_in_ball(&fs, &w, center, 10),
            Err(FlipError::RadiusTooLarge { .. })
        ));
    }

    #[test]
    fn ball_must_be_unaffected() {
        let q = make_cube(6).unwrap();
        let part_of: Vec<usize> = q.coords.iter().map(|c| usize::from(c.i == 1)).collect();
        // flipping part 1 onto itself and then back means G must carry the flip
        let h = crate::graph::Graph::pattern(2, [], [1]).unwrap();
        let g = super::super::flip_graph(&q.graph, &part_of, &h);
        let fs = FlipStructure::new(g, part_of, h).unwrap();
        let w = CubeWitness::new(6, q.coords.clone());
        let v = q.index(CubeCoord::new(3, 3, 3)).unwrap();
        assert!(matches!(
            find_cube_in_ball(&fs, &w, v, 3),
            Err(FlipError::BallAffected { .. })
        ));
        assert!(find_cube_in_ball(&fs, &w, v, 1).is_ok());
    }

    #[test]
    fn avoiding_block_is_lexicographic() {
        let (fs, w) = plain(9, vec![0; 729], 2);
        let ex = extract_avoiding_subcube(&fs, &w, 1).unwrap();
        assert_eq!(ex.block, [0, 0, 0]);
        assert!(ex.witness.verify(&apply_flip(&ex.structure)).passed());
        let q = make_cube(9).unwrap();
        let mut part_of = vec![0; 729];
        part_of[q.index(CubeCoord::new(1, 1, 1)).unwrap()] = 1;
        part_of[q.index(CubeCoord::new(2, 2, 6)).unwrap()] = 1;
        let (fs, w) = plain(9, part_of, 2);
        let ex = extract_avoiding_subcube(&fs, &w, 1).unwrap();
        assert_eq!(ex.block, [0, 0, 2]);
        assert_eq!(ex.original.len(), 27);
        assert_eq!(ex.structure.part_sizes(), vec![27, 0]);
    }

    #[test]
    fn extraction_errors() {
        let (fs, w) = plain(4, vec![0; 64], 1);
        assert_eq!(
            extract_avoiding_subcube(&fs, &w, 0).err(),
            Some(FlipError::SideNotDivisible(4))
        );
        let (fs, w) = plain(3, vec![0; 27], 1);
        assert!(matches!(
            extract_avoiding_subcube(&fs, &w, 0),
            Err(FlipError::PartTooLarge { size: 27, .. })
        ));
    }

    #[test]
    fn elimination_in_index_order() {
        let q = make_cube(9).unwrap();
        let at = |i, j, k| q.index(CubeCoord::new(i, j, k)).unwrap();
        let mut part_of = vec![0; 729];
        part_of[at(1, 1, 1)] = 1;
        part_of[at(9, 9, 9)] = 1;
        let (fs, w) = plain(9, part_of.clone(), 3);
        let (ex, eliminated) = eliminate_small_parts(&fs, &w).unwrap();
        assert_eq!(eliminated, vec![1]);
        assert_eq!(ex.block, [0, 0, 1]);
        assert_eq!(ex.witness.side, 3);
        assert_eq!(ex.structure.part_sizes(), vec![27, 0, 0]);
        assert!(ex.original.iter().all(|&v| q.coords[v].i <= 3 && q.coords[v].k >= 4));
        // a second small part inside the chosen block needs another factor of 3,
        // and so does the part 0 remainder left behind in the unit block
        part_of[at(1, 1, 4)] = 2;
        let (fs, w) = plain(9, part_of, 3);
        assert_eq!(
            eliminate_small_parts(&fs, &w).err(),
            Some(FlipError::SideNotDivisible(1))
        );
        let (fs, w) = plain(3, vec![0; 27], 1);
        let (ex, eliminated) = eliminate_small_parts(&fs, &w).unwrap();
        assert!(eliminated.is_empty());
        assert_eq!(ex.original.len(), 27);
    }
}
