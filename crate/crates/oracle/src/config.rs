use flux_core::{Bounds, Label};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Knobs shared by every generator and suite.
#[derive(Clone, Debug, Serialize)]
pub struct GenConfig {
    /// Element labels used by the random type generator.
    pub labels: Vec<Label>,
    /// Upper bound on the AST size of generated expressions and statements.
    pub max_term_size: usize,
    /// Upper bound on the AST size of generated types.
    pub max_type_size: usize,
    /// How deep element types may nest.
    pub max_nesting: usize,
    /// Bounds for enumerating values.
    pub bounds: Bounds,
    /// Length bound for atom words.
    pub word_length: usize,
    /// Cases per randomized suite.
    pub cases: usize,
    /// Attempts before a typed-term generator gives up.
    pub retries: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            labels: ["a", "b"].iter().map(|l| Label::new(*l).unwrap()).collect(),
            max_term_size: 12,
            max_type_size: 7,
            max_nesting: 2,
            bounds: Bounds { depth: 3, width: 3 },
            word_length: 3,
            cases: 200,
            retries: 400,
            seed: 42,
        }
    }
}

impl GenConfig {
    pub fn with_seed(mut self, seed: u64) -> GenConfig {
        self.seed = seed;
        self
    }

    pub fn with_cases(mut self, cases: usize) -> GenConfig {
        self.cases = cases;
        self
    }

    /// A generator for case `index` of the suite salted with `salt`. Cases
    /// are independent streams, so parallel execution stays reproducible.
    pub fn rng(&self, salt: u64, index: usize) -> ChaCha8Rng {
        let mut rng =
            ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        rng.set_stream(index as u64);
        rng
    }
}
