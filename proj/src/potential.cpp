#include "sturm/potential.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace sturm {

namespace {

cplx quad_mean(const cvec& s) {
    const int n = static_cast<int>(s.size()) - 1;
    const rvec w = simpson_weights(n, kPi / n);
    cplx acc = 0;
    for (int i = 0; i <= n; ++i) acc += w[i] * s[i];
    return acc / kPi;
}

}  // namespace

Potential::Potential(cvec samples, Interp interp) : samples_(std::move(samples)), interp_(interp) {
    if (samples_.size() < 5)
        throw Error(ErrorKind::invalid_potential, "potential needs at least 5 grid samples");
    for (const cplx& v : samples_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::invalid_potential, "non-finite potential sample");
    mean_ = quad_mean(samples_);
}

Potential Potential::from_function(const std::function<cplx(double)>& f, int grid_size, Interp interp) {
    cvec s(grid_size);
    const double h = kPi / (grid_size - 1);
    for (int i = 0; i < grid_size; ++i) s[i] = f(i == grid_size - 1 ? kPi : i * h);
    return Potential(std::move(s), interp);
}

Potential Potential::constant(cplx c, int grid_size) { return Potential(cvec(grid_size, c)); }

cplx Potential::operator()(double x) const {
    const int n = grid_size() - 1;
    const double hh = h();
    double u = x / hh;
    int i = static_cast<int>(std::floor(u));
    i = std::clamp(i, 0, n - 1);
    const double t = u - i;
    if (interp_ == Interp::linear) return (1 - t) * samples_[i] + t * samples_[i + 1];
    // four-point Lagrange on nodes j0..j0+3 around [i, i+1]
    int j0 = std::clamp(i - 1, 0, n - 3);
    const double s = u - j0;
    const double l0 = -(s - 1) * (s - 2) * (s - 3) / 6.0;
    const double l1 = s * (s - 2) * (s - 3) / 2.0;
    const double l2 = -s * (s - 1) * (s - 3) / 2.0;
    const double l3 = s * (s - 1) * (s - 2) / 6.0;
    return l0 * samples_[j0] + l1 * samples_[j0 + 1] + l2 * samples_[j0 + 2] + l3 * samples_[j0 + 3];
}

Potential Potential::shifted(cplx c) const {
    cvec s = samples_;
    for (auto& v : s) v += c;
    return Potential(std::move(s), interp_);
}

Potential Potential::resampled(int grid_size) const {
    return from_function([this](double x) { return (*this)(x); }, grid_size, interp_);
}

double l2_distance(const Potential& p, const Potential& q) {
    const int n = p.grid_size() - 1;
    const rvec w = simpson_weights(n, p.h());
    double acc = 0;
    for (int i = 0; i <= n; ++i) acc += w[i] * std::norm(p.samples()[i] - q(p.x(i)));
    return std::sqrt(acc);
}

double l2_norm(const Potential& p) {
    const int n = p.grid_size() - 1;
    const rvec w = simpson_weights(n, p.h());
    double acc = 0;
    for (int i = 0; i <= n; ++i) acc += w[i] * std::norm(p.samples()[i]);
    return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// expression parser

namespace {

struct Node {
    virtual ~Node() = default;
    virtual double eval(double x) const = 0;
};
using NodeP = std::shared_ptr<Node>;

struct Num : Node {
    double v;
    explicit Num(double v) : v(v) {}
    double eval(double) const override { return v; }
};
struct Var : Node {
    double eval(double x) const override { return x; }
};
struct Bin : Node {
    char op;
    NodeP a, b;
    Bin(char op, NodeP a, NodeP b) : op(op), a(std::move(a)), b(std::move(b)) {}
    double eval(double x) const override {
        const double u = a->eval(x), v = b->eval(x);
        switch (op) {
        case '+': return u + v;
        case '-': return u - v;
        case '*': return u * v;
        case '/': return u / v;
        default: return std::pow(u, v);
        }
    }
};
struct Neg : Node {
    NodeP a;
    explicit Neg(NodeP a) : a(std::move(a)) {}
    double eval(double x) const override { return -a->eval(x); }
};
struct Fn : Node {
    bool is_sin;
    NodeP a;
    Fn(bool s, NodeP a) : is_sin(s), a(std::move(a)) {}
    double eval(double x) const override { return is_sin ? std::sin(a->eval(x)) : std::cos(a->eval(x)); }
};

class Parser {
public:
    explicit Parser(std::string s) : s_(std::move(s)) {}

    NodeP parse() {
        NodeP e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& m) const {
        throw Error(ErrorKind::invalid_potential, "expression: " + m + " at position " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    NodeP expr() {
        NodeP a = term();
        for (;;) {
            if (eat('+')) a = std::make_shared<Bin>('+', a, term());
            else if (eat('-')) a = std::make_shared<Bin>('-', a, term());
            else return a;
        }
    }
    NodeP term() {
        NodeP a = unary();
        for (;;) {
            if (eat('*')) a = std::make_shared<Bin>('*', a, unary());
            else if (eat('/')) {
                NodeP b = unary();
                if (!constant(b)) fail("division only by constants");
                a = std::make_shared<Bin>('/', a, b);
            } else return a;
        }
    }
    NodeP unary() {
        if (eat('-')) return std::make_shared<Neg>(unary());
        if (eat('+')) return unary();
        return power();
    }
    NodeP power() {
        NodeP a = primary();
        if (eat('^')) {
            NodeP b = unary();
            if (!constant(b)) fail("exponent must be a constant");
            const double p = b->eval(0);
            if (p < 0 || p != std::floor(p)) fail("exponent must be a nonnegative integer");
            a = std::make_shared<Bin>('^', a, b);
        }
        return a;
    }
    NodeP primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t used = 0;
            const double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            return std::make_shared<Num>(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            if (id == "x") return std::make_shared<Var>();
            if (id == "pi") return std::make_shared<Num>(kPi);
            if (id == "sin" || id == "cos") {
                if (!eat('(')) fail("expected '(' after " + id);
                NodeP arg = expr();
                if (!eat(')')) fail("expected ')'");
                if (!affine(arg)) fail(id + " argument must be affine in x");
                return std::make_shared<Fn>(id == "sin", arg);
            }
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        if (eat('(')) {
            NodeP e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
    static bool affine(const NodeP& n) {
        const double a = n->eval(0.0), b = n->eval(1.0), c = n->eval(2.5);
        return std::abs(c - a - 2.5 * (b - a)) <= 1e-12 * (1 + std::abs(a) + std::abs(b) + std::abs(c));
    }
    static bool constant(const NodeP& n) {
        // constant if it evaluates identically at a few points
        const double a = n->eval(0.3), b = n->eval(1.7), c = n->eval(2.9);
        return a == b && b == c;
    }
};

}  // namespace

std::function<double(double)> parse_expression(const std::string& text) {
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char ch) { return std::isspace(ch); }), t.end());
    if (t == "zero") return [](double) { return 0.0; };
    NodeP root = Parser(text).parse();
    return [root](double x) { return root->eval(x); };
}

Potential potential_from_expression(const std::string& text, int grid_size, Interp interp) {
    auto f = parse_expression(text);
    return Potential::from_function([&](double x) { return cplx(f(x), 0.0); }, grid_size, interp);
}

Potential read_potential_csv(const std::string& path, Interp interp) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    std::string line;
    cvec s;
    rvec xs;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, re, im = 0;
        if (!(ls >> x >> re)) continue;  // header
        ls >> im;
        xs.push_back(x);
        s.emplace_back(re, im);
    }
    if (s.size() < 5) throw Error(ErrorKind::invalid_potential, path + ": too few rows");
    const double h = kPi / (s.size() - 1);
    for (size_t i = 0; i < xs.size(); ++i)
        if (std::abs(xs[i] - i * h) > 1e-6)
            throw Error(ErrorKind::invalid_potential, path + ": grid is not uniform on [0, pi]");
    return Potential(std::move(s), interp);
}

void write_potential_csv(const std::string& path, const Potential& q) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
    out << "x,re,im\n" << std::setprecision(17);
    for (int i = 0; i < q.grid_size(); ++i)
        out << q.x(i) << ',' << q.samples()[i].real() << ',' << q.samples()[i].imag() << '\n';
}

}  // namespace sturm
