//! Example pairs shipped inside the binary.

pub const BUNDLED: [(&str, &str); 7] = [
    ("p2-quartic", include_str!("../pairs/p2-quartic.json")),
    ("p2-line", include_str!("../pairs/p2-line.json")),
    ("blowup-line", include_str!("../pairs/blowup-line.json")),
    ("interior-minus2", include_str!("../pairs/interior-minus2.json")),
    ("boundary-minus2", include_str!("../pairs/boundary-minus2.json")),
    ("p2-conic-fano", include_str!("../pairs/p2-conic-fano.json")),
    ("p2-empty-boundary", include_str!("../pairs/p2-empty-boundary.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}
