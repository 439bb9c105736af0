//! Small hand-built instances with known optima, used by tests, docs and the
//! command line demo.

use crate::instance::{Instance, Item};

/// Five items, capacity 4, three time steps. Optimum: 2 bins.
pub fn five_items() -> Instance {
    Instance::new(
        "five-items",
        4,
        vec![
            Item::new(2, 0, 2),
            Item::new(2, 1, 13),
            Item::new(1, 4, 9),
            Item::new(2, 6, 7),
            Item::new(1, 11, 12),
        ],
    )
    .expect("valid instance")
}

/// Five items over two steps where every single step packs into 2 bins but the
/// temporal problem needs 3. The continuous relaxation of the pattern model is
/// 2.5.
pub fn two_steps() -> Instance {
    Instance::new(
        "two-steps",
        10,
        vec![
            Item::new(10, 0, 1),
            Item::new(2, 0, 2),
            Item::new(4, 0, 2),
            Item::new(6, 1, 2),
            Item::new(8, 1, 2),
        ],
    )
    .expect("valid instance")
}

/// 24 items, capacity 3: each step needs 9 bins, the temporal optimum is 11.
pub fn lb0_gap() -> Instance {
    let mut items = Vec::with_capacity(24);
    items.extend((0..9).map(|_| Item::new(2, 0, 1)));
    items.extend((0..9).map(|_| Item::new(1, 0, 2)));
    items.extend((0..6).map(|_| Item::new(3, 1, 2)));
    Instance::new("lb0-gap", 3, items).expect("valid instance")
}
