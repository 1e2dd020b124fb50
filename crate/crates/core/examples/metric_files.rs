//! Reading, printing and rejecting metric files.

use conflab::metric::MetricField;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/metrics");
    for name in ["sphere3.metric", "tangherlini5.metric", "warped4.metric"] {
        let text = std::fs::read_to_string(format!("{dir}/{name}")).expect("example file");
        let field = MetricField::from_file_str(&text).expect("valid file");
        println!("== {name}: n = {}, coords {:?}, params {:?}", field.dim(), field.coords(), field.params());
        // the printed form parses back to the same field
        let again = MetricField::from_file_str(&field.to_file_string()).unwrap();
        assert_eq!(again.matrix(), field.matrix());
        print!("{}", field.to_file_string());
    }

    println!("\n== errors carry a line and byte position");
    for bad in [
        "coords = x, y\ng[1][1] = 1 + \ng[2][2] = 1",
        "coords = x, y\ng[1][1] = cosh(x)\ng[2][2] = 1",
        "coords = x, y\ng[1][1] = 1\ng[2][2] = z",
        "coords = x, y\ng[2][1] = 1",
    ] {
        match MetricField::from_file_str(bad) {
            Ok(_) => println!("unexpectedly accepted"),
            Err(e) => println!("{e}"),
        }
    }
}
