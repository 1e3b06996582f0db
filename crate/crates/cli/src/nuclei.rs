use oner_core::efg::NucleusRecord;

/// (name, 2I, quadrupole moment in barn, γ/2π in MHz/T).
const TABLE: &[(&str, u32, f64, f64)] = &[
    ("H2", 2, 0.002_860, 6.535_9),
    ("Li7", 3, -0.040_0, 16.547_1),
    ("Be9", 3, 0.052_9, 8.975_5),
    ("N14", 2, 0.020_44, 3.077_7),
    ("Al27", 5, 0.146_6, 11.103_1),
];

/// Case-insensitive lookup by name, e.g. "Be9".
pub fn lookup(name: &str) -> Option<NucleusRecord> {
    TABLE
        .iter()
        .find(|(n, ..)| n.eq_ignore_ascii_case(name.trim()))
        .map(|&(n, two_i, q, gamma)| {
            NucleusRecord::new(n, two_i, q, gamma).expect("table entries are valid")
        })
}

pub fn names() -> impl Iterator<Item = &'static str> {
    TABLE.iter().map(|(n, ..)| *n)
}
