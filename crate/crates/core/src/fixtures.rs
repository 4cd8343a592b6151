//! Small reference networks with hand-checked state spaces.

use crate::model::{Network, Vertex};

/// Two parents `a`, `b` feeding deterministic `d`, whose children `c` and
/// `e` also hang off `a` and `b` respectively. Cardinality 3 everywhere
/// except `d`, which has 3² − 1 = 8.
pub const FIX_A_TEXT: &str = "net fixA
var a 3 -
var b 3 -
var d 8 det | a b
var c 3 - | d a
var e 3 - | d b
";

/// Deterministic `d` over `a`, `b` with stochastic children `c`, `e`;
/// stochastic cardinality 10, `|d|` = 40.
pub const FIX_B_TEXT: &str = "net fixB
var a 10 -
var b 10 -
var d 40 det | a b
var c 10 - | d
var e 10 - | d
";

/// The FIX-A structure with stochastic cardinality `eta` and `|d| = eta² − 1`.
pub fn fix_a(eta: u64) -> Network {
    assert!(eta >= 2);
    Network::new(
        "fixA",
        vec![
            Vertex::stochastic("a", eta),
            Vertex::stochastic("b", eta),
            Vertex::deterministic("d", eta * eta - 1).with_parents([0, 1]),
            Vertex::stochastic("c", eta).with_parents([2, 0]),
            Vertex::stochastic("e", eta).with_parents([2, 1]),
        ],
    )
    .expect("fixture is valid")
}

pub fn fix_b() -> Network {
    Network::new(
        "fixB",
        vec![
            Vertex::stochastic("a", 10),
            Vertex::stochastic("b", 10),
            Vertex::deterministic("d", 40).with_parents([0, 1]),
            Vertex::stochastic("c", 10).with_parents([2]),
            Vertex::stochastic("e", 10).with_parents([2]),
        ],
    )
    .expect("fixture is valid")
}
