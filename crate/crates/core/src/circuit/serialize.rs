use alloc::string::String;
use core::fmt::Write;

use super::Circuit;
use crate::gate::GateKind;

/// Canonical text: LF endings, one gate per line, `ctrl` prefixes in control order.
///
/// Rotation angles use the shortest decimal that round-trips; explicit matrices use
/// 17 significant digits per real and imaginary part.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    if let Some(name) = c.name() {
        for line in name.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "qubits {}", c.num_qubits());
    for g in c.gates() {
        for q in g.controls() {
            let _ = write!(out, "ctrl {q} ");
        }
        out.push_str(g.kind().mnemonic());
        if let GateKind::Ry(theta) = g.kind() {
            let _ = write!(out, " {theta}");
        }
        for q in g.targets() {
            let _ = write!(out, " {q}");
        }
        if let GateKind::Unitary(u) = g.kind() {
            out.push_str(" [");
            for z in u.entries() {
                let _ = write!(out, " {:.16e} {:.16e}", z.re, z.im);
            }
            out.push_str(" ]");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::gate::{GateInstance, Unitary};
    use crate::C64;

    #[test]
    fn canonical_forms() {
        assert_eq!(serialize_circuit(&Circuit::new(3).unwrap()), "qubits 3\n");
        let c = Circuit::from_gates(
            2,
            [
                GateInstance::single(GateKind::Ry(0.2), 1).unwrap(),
                GateInstance::single(GateKind::H, 0).unwrap().with_control(1).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(serialize_circuit(&c), "qubits 2\nry 0.2 1\nctrl 1 h 0\n");
    }

    #[test]
    fn round_trip_bell_and_unitary() {
        let c = parse_circuit("qubits 2\nh 0\ncnot 0 1").unwrap();
        let back = parse_circuit(&serialize_circuit(&c)).unwrap();
        assert!(c.same_structure(&back));

        let s = core::f64::consts::FRAC_1_SQRT_2;
        let u = Unitary::new(alloc::vec![
            C64::new(s, 0.0),
            C64::new(0.0, s),
            C64::new(0.0, s),
            C64::new(s, 0.0),
        ])
        .unwrap();
        let c = Circuit::from_gates(
            2,
            [GateInstance::new(GateKind::Unitary(u), alloc::vec![1], alloc::vec![0]).unwrap()],
        )
        .unwrap()
        .with_name("sqrt-x like");
        let text = serialize_circuit(&c);
        assert!(text.starts_with("# sqrt-x like\nqubits 2\nctrl 0 unitary 1 [ 7.0710678118654757e-1"));
        assert!(c.same_structure(&parse_circuit(&text).unwrap()));
    }
}
