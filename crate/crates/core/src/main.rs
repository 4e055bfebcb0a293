fn main() {
    println!("strainid CLI placeholder");
}
