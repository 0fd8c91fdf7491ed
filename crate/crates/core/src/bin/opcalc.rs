fn main() {
    println!("opcalc CLI placeholder");
}
