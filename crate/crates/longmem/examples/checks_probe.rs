fn main() {
    for c in [longmem::checks::second_order_coefficients()] {
        println!("{:2} {:5} {:6.1}s {} :: {}", c.id, if c.pass { "PASS" } else { "FAIL" }, c.seconds, c.name, c.detail);
    }
}
