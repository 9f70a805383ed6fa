//! Reference homology tables for one boundary curve.
//!
//! Integral entries are written as in the source tables (primary form, so
//! `Z2+Z3` rather than `Z6`); mod-2 entries are dimensions. Generator names
//! are kept as annotations and never checked.

use slitkit::{Coefficients, HomologyGroup, ModuliIndex};

use crate::groups::parse_group;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureTable {
    pub tag: &'static str,
    pub index: ModuliIndex,
    pub ring: Coefficients,
    /// `H_0, H_1, …`; omitted degrees are zero.
    pub expected: Vec<HomologyGroup>,
    pub annotations: Vec<&'static str>,
}

impl FixtureTable {
    pub fn h(&self) -> usize {
        self.index.h()
    }

    /// Expected groups padded with zeros to `len` degrees.
    pub fn expected_padded(&self, len: usize) -> Vec<HomologyGroup> {
        (0..len.max(self.expected.len()))
            .map(|k| {
                self.expected.get(k).cloned().unwrap_or(HomologyGroup {
                    degree: k,
                    betti: 0,
                    torsion: Vec::new(),
                })
            })
            .collect()
    }
}

type Column = (usize, &'static [&'static str], &'static [&'static str]);

const G0: &[Column] = &[
    (0, &["Z"], &["1"]),
    (1, &["Z"], &["a"]),
    (2, &["Z", "Z"], &["a^2", "b"]),
    (3, &["Z", "Z"], &["a^3", "ab"]),
    (4, &["Z", "Z", "Z2"], &["a^4", "a^2 b", "b^2"]),
    (5, &["Z", "Z", "Z2"], &["a^5", "a^3 b", "a b^2"]),
];

const G1: &[Column] = &[
    (0, &["Z", "Z"], &["c", "d"]),
    (1, &["Z", "Z", "Z2"], &["ac", "ad", "e"]),
    (2, &["Z", "Z+Z2", "Z2^2", "Z2"], &["a^2 c", "a^2 d, bc", "ae, bd", "f"]),
    (
        3,
        &["Z", "Z+Z2", "Z2^2", "Z+Z2^2", "Z^2", "Z"],
        &["a^3 c", "a^3 d, abc", "a^2 e, abd", "af, be", "", ""],
    ),
    (
        4,
        &["Z", "Z+Z2", "Z2^3", "Z^2+Z2^3", "Z^3+Z2^2", "Z^2+Z2", "Z"],
        &["a^4 c", "a^4 d, a^2 bc", "a^3 e, a^2 bd, b^2 c", "a^2 f, abe, b^2 d", "bf", "", ""],
    ),
];

const G2: &[Column] = &[
    (0, &["Z", "Z10", "Z2", "Z+Z2", "Z2+Z3"], &["c^2", "cd", "d^2", "s/mu, Te", "v"]),
    (
        1,
        &["Z", "Z10", "Z+Z2", "Z^2+Z2^2", "Z2^2+Z3^2", "Z", "Z"],
        &["ac^2", "acd", "ad^2", "as/mu, a Te", "av", "", ""],
    ),
    (
        2,
        &["Z", "Z10+Z2", "Z+Z2^2", "Z^3+Z2^4", "Z+Z2^5+Z3^3", "Z^2+Z2^4+Z3", "Z^2+Z2^3", "Z2"],
        &["a^2 c^2", "a^2 cd, bc^2", "a^2 d^2, bcd", "a^2 s/mu, a^2 Te, bd^2", "b Te, a^2 v", "", "", ""],
    ),
];

const M2G0: &[Column] = &[
    (0, &["1"], &["1"]),
    (1, &["1"], &["a"]),
    (2, &["1", "1"], &["a^2", "b"]),
    (3, &["1", "1"], &["a^3", "ab"]),
    (4, &["1", "1", "1", "1"], &["a^4", "a^2 b", "b^2", "Qb"]),
    (5, &["1", "1", "1", "1"], &["a^5", "a^3 b", "a b^2", "a Qb"]),
];

const M2G1: &[Column] = &[
    (0, &["1", "1"], &["c", "d"]),
    (1, &["1", "1", "1", "1"], &["ac", "ad", "e", "Eb"]),
    (2, &["1", "2", "3", "3", "1"], &["a^2 c", "a^2 d, bc", "ae, bd, ?", "f, a Eb, ?", "?"]),
    (
        3,
        &["1", "2", "3", "5", "4", "1"],
        &["a^3 c", "a^3 d, abc", "a^2 e, abd, ?", "af, be, a^2 Eb, ?^2", "b Eb, ?^3", "?"],
    ),
    (
        4,
        &["1", "2", "4", "8", "8", "5", "2"],
        &[
            "a^4 c",
            "a^4 d, a^2 bc",
            "a^3 e, a^2 bd, b^2 c, ?",
            "a^2 f, abe, b^2 d, Qb c, a^3 Eb, ?^3",
            "bf, Qb d, ab Eb, ?^5",
            "?^5",
            "?^2",
        ],
    ),
];

const M2G2: &[Column] = &[
    (
        0,
        &["1", "1", "2", "3", "2", "1"],
        &["c^2", "cd", "d^2, ?", "s/mu, Te, Qd", "TEb, ?", "?"],
    ),
    (
        1,
        &["1", "1", "2", "5", "4", "3", "1"],
        &["ac^2", "acd", "ad^2, ?", "as/mu, a Te, a Qd, c Eb, de", "a TEb, d Eb, ?^2", "?^3", "?"],
    ),
    (
        2,
        &["1", "2", "5", "9", "10", "11", "9", "4", "1"],
        &[
            "a^2 c^2",
            "a^2 cd, bc^2",
            "a^2 d^2, bcd, ?^3",
            "a^2 s/mu, a^2 Te, a^2 Qd, ac Eb, ade, bd^2, ?^3",
            "a^2 TEb, ad Eb, b Te, ?^7",
            "b TEb, ?^10",
            "?^9",
            "?^4",
            "?",
        ],
    ),
];

fn build(tag: &'static str, genus: usize, ring: Coefficients, columns: &[Column]) -> Vec<FixtureTable> {
    columns
        .iter()
        .map(|&(m, entries, names)| {
            let expected = entries
                .iter()
                .enumerate()
                .map(|(k, e)| match ring {
                    Coefficients::Integers => parse_group(k, e).expect("well-formed fixture"),
                    Coefficients::Prime(_) => HomologyGroup {
                        degree: k,
                        betti: e.parse().expect("well-formed fixture"),
                        torsion: Vec::new(),
                    },
                })
                .collect();
            FixtureTable {
                tag,
                index: ModuliIndex::new(genus, 1, m).expect("valid index"),
                ring,
                expected,
                annotations: names.to_vec(),
            }
        })
        .collect()
}

/// All tables, integral first.
pub fn all() -> Vec<FixtureTable> {
    let z = Coefficients::Integers;
    let f2 = Coefficients::F2;
    [
        build("z-g0", 0, z, G0),
        build("z-g1", 1, z, G1),
        build("z-g2", 2, z, G2),
        build("f2-g0", 0, f2, M2G0),
        build("f2-g1", 1, f2, M2G1),
        build("f2-g2", 2, f2, M2G2),
    ]
    .concat()
}

pub fn find(tag: &str, index: ModuliIndex) -> Option<FixtureTable> {
    all().into_iter().find(|f| f.tag == tag && f.index == index)
}
