fn main() {
    classgroup::report::placeholder();
}
