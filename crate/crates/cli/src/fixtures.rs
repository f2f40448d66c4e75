//! Example inputs shipped with the tool, addressable by name.

pub const FIXTURES: [(&str, &str); 5] = [
    ("FIX-A", include_str!("../fixtures/fix-a.json")),
    ("FIX-B", include_str!("../fixtures/fix-b.json")),
    ("FIX-C", include_str!("../fixtures/fix-c.json")),
    ("STANLEY-LINE", include_str!("../fixtures/stanley-line.json")),
    ("STANLEY-OCTANT", include_str!("../fixtures/stanley-octant.json")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
