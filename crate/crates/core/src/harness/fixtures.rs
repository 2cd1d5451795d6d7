//! Built-in data: the credit-line instance and the four cost-comparison tables.

use rand_distr::{Distribution, StandardNormal};

use crate::costs::PairwiseComparisons;
use crate::sampling::seeded_rng;

/// Logistic-regression coefficients of the four credit features.
pub const HELOC_COEFFICIENTS: [f64; 4] = [-0.22974527, 0.15633134, 0.52023116, -0.61600619];
pub const HELOC_BIAS: f64 = -0.08242841;

/// One recourse action per feature: (label, feature moved, direction).
pub const HELOC_ACTIONS: [(&str, usize, f64); 4] = [
    ("reduce high-utilization payments", 0, -1.0),
    ("add satisfactory payments", 1, 1.0),
    ("raise share of non-delinquent payments", 2, 1.0),
    ("reduce revolving balance ratio", 3, -1.0),
];

/// Action template for the credit-line experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct HelocFixture {
    pub dim: usize,
    pub labels: Vec<String>,
    /// Unit feature-change direction for each non-null action.
    pub directions: Vec<Vec<f64>>,
    /// Coefficients followed by the bias.
    pub theta_true: Vec<f64>,
}

pub fn heloc_fixture() -> HelocFixture {
    let directions = HELOC_ACTIONS
        .iter()
        .map(|&(_, feature, sign)| {
            let mut d = vec![0.0; 4];
            d[feature] = sign;
            d
        })
        .collect();
    let mut theta_true = HELOC_COEFFICIENTS.to_vec();
    theta_true.push(HELOC_BIAS);
    HelocFixture {
        dim: 4,
        labels: HELOC_ACTIONS
            .iter()
            .map(|(l, _, _)| l.to_string())
            .collect(),
        directions,
        theta_true,
    }
}

/// A comparison table and the cost vector published for it.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    pub name: &'static str,
    pub comparisons: PairwiseComparisons,
    pub expected: [f64; 4],
    /// Item indices from most to least costly.
    pub ordering: [usize; 4],
}

type Tally = [(usize, usize, u64, u64); 6];

const TABLES: [(&str, Tally, [f64; 4], [usize; 4]); 4] = [
    (
        "i",
        [
            (0, 1, 8, 2),
            (0, 2, 9, 1),
            (0, 3, 7, 3),
            (1, 2, 2, 8),
            (1, 3, 0, 10),
            (2, 3, 1, 9),
        ],
        [0.5151, 0.0282, 0.0723, 0.3844],
        [0, 3, 2, 1],
    ),
    (
        "ii",
        [
            (0, 1, 2, 8),
            (0, 2, 3, 7),
            (0, 3, 4, 6),
            (1, 2, 6, 4),
            (1, 3, 7, 3),
            (2, 3, 6, 4),
        ],
        [0.1159, 0.428, 0.2758, 0.1803],
        [1, 2, 3, 0],
    ),
    (
        "iii",
        [
            (0, 1, 2, 8),
            (0, 2, 1, 9),
            (0, 3, 4, 6),
            (1, 2, 3, 7),
            (1, 3, 7, 3),
            (2, 3, 7, 3),
        ],
        [0.07640764, 0.27692769, 0.50635064, 0.14031403],
        [2, 1, 3, 0],
    ),
    (
        "iv",
        [
            (0, 1, 8, 2),
            (0, 2, 9, 1),
            (0, 3, 2, 3),
            (1, 2, 7, 8),
            (1, 3, 0, 10),
            (2, 3, 1, 9),
        ],
        [0.2987, 0.0428, 0.0476, 0.6109],
        [3, 0, 2, 1],
    ),
];

pub fn cost_tables_fixture() -> Vec<CostTable> {
    TABLES
        .iter()
        .map(|(name, tally, expected, ordering)| CostTable {
            name,
            comparisons: PairwiseComparisons::from_pairs(4, tally)
                .expect("fixture tables are well formed"),
            expected: *expected,
            ordering: *ordering,
        })
        .collect()
}

/// Seeded stand-in population: each feature drawn from `N(mean, std^2)`.
pub fn synthetic_roster(count: usize, dim: usize, mean: f64, std: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    mean + std * z
                })
                .collect()
        })
        .collect()
}
