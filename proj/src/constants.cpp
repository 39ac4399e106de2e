#include "ericksen/constants.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "ericksen/density.hpp"

namespace ericksen {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void require(bool ok, const std::string& name, const std::string& detail) {
    if (!ok) throw ValidationError(name, detail);
}

}  // namespace

std::string to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::A: return "A";
        case CaseTag::B: return "B";
        case CaseTag::C: return "C";
    }
    return "?";
}

CaseTag parse_case(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (t == "A") return CaseTag::A;
    if (t == "B") return CaseTag::B;
    if (t == "C" || t == "C1" || t == "C2") return CaseTag::C;
    throw std::invalid_argument("unknown case tag '" + text + "' (expected A, B or C)");
}

DerivedConstants derive_constants(const ElasticConstants& c) {
    const double b1 = c.beta + c.L1;
    const double b2 = c.beta + c.L2;
    if (!(b1 > 0.0)) throw std::invalid_argument("derive_constants: beta + L1 must be positive");
    if (!(b2 > 0.0)) throw std::invalid_argument("derive_constants: beta + L2 must be positive");
    DerivedConstants d;
    d.sigma = -c.L3 / (2.0 * b1);
    d.nu = -c.L4 / (2.0 * b2);
    d.kbar1 = c.k1 - c.L3 * c.L3 / (4.0 * b1);
    d.kbar3 = c.k3 - c.L4 * c.L4 / (4.0 * b2);
    d.k5 = b2;
    d.k6 = b1;
    return d;
}

Coercivity coercivity_bounds(const ElasticConstants& c) {
    // W2 is a quadratic form in v = (grad s, s grad n). By frame invariance it suffices to take
    // n = e3, where n^T grad n = 0 leaves the first two rows of grad n free.
    constexpr int dim = 9;
    const Vec3 n{0.0, 0.0, 1.0};
    auto eval = [&](const Eigen::Matrix<double, dim, 1>& v) {
        const Vec3 G{v[0], v[1], v[2]};
        Mat3 J;
        for (int k = 0; k < 6; ++k) J(k / 3, k % 3) = v[3 + k];
        return density_parts(c, 1.0, n, G, J).total();
    };
    Eigen::Matrix<double, dim, dim> Q;
    Eigen::Matrix<double, dim, 1> e = Eigen::Matrix<double, dim, 1>::Zero();
    for (int i = 0; i < dim; ++i) {
        e.setZero();
        e[i] = 1.0;
        Q(i, i) = eval(e);
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            e.setZero();
            e[i] = 1.0;
            e[j] = 1.0;
            Q(i, j) = Q(j, i) = 0.5 * (eval(e) - Q(i, i) - Q(j, j));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, dim, dim>> solver(Q, Eigen::EigenvaluesOnly);
    return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

Coercivity validate(const ElasticConstants& c, CaseTag tag) {
    require(c.alpha > 0.0, "basic:alpha>0", "alpha = " + fmt(c.alpha));
    require(c.beta > 0.0, "basic:beta>0", "beta = " + fmt(c.beta));
    require(c.k1 >= 0.0, "frank:k1>=0", "k1 = " + fmt(c.k1));
    require(c.k2 >= 0.0, "frank:k2>=0", "k2 = " + fmt(c.k2));
    require(c.k3 >= 0.0, "frank:k3>=0", "k3 = " + fmt(c.k3));
    require(c.k2 >= std::abs(c.k4), "frank:k2>=|k4|", "k2 = " + fmt(c.k2) + ", k4 = " + fmt(c.k4));
    require(2.0 * c.k1 >= c.k2 + c.k4, "frank:2k1>=k2+k4",
            "2k1 = " + fmt(2.0 * c.k1) + ", k2 + k4 = " + fmt(c.k2 + c.k4));
    require(c.L1 >= 0.0, "basic:L1>=0", "L1 = " + fmt(c.L1));
    require(c.L2 >= 0.0, "basic:L2>=0", "L2 = " + fmt(c.L2));

    switch (tag) {
        case CaseTag::A: {
            require(c.L1 > 0.0 && c.L2 == 0.0 && c.L4 == 0.0, "case-structure",
                    "case A needs L1 > 0 and L2 = L4 = 0");
            const double lhs = 3.0 * c.L3 * c.L3;
            const double rhs = 4.0 * c.L1 * c.alpha;
            require(lhs < rhs, "cond1", "3 L3^2 = " + fmt(lhs) + " is not below 4 L1 alpha = " + fmt(rhs));
            break;
        }
        case CaseTag::B: {
            require(c.L2 > 0.0 && c.L1 == 0.0 && c.L3 == 0.0, "case-structure",
                    "case B needs L2 > 0 and L1 = L3 = 0");
            const double lhs = c.L4 * c.L4;
            const double rhs = 4.0 * c.L2 * c.alpha;
            require(lhs < rhs, "cond2", "L4^2 = " + fmt(lhs) + " is not below 4 L2 alpha = " + fmt(rhs));
            break;
        }
        case CaseTag::C:
            require(c.L1 == 0.0 && c.L2 == 0.0 && c.L3 == 0.0 && c.L4 == 0.0, "case-structure",
                    "case C needs L1 = L2 = L3 = L4 = 0");
            break;
    }

    const DerivedConstants d = derive_constants(c);
    require(d.kbar1 >= 0.0, "positivity:kbar1>=0", "kbar1 = " + fmt(d.kbar1));
    require(d.kbar3 >= 0.0, "positivity:kbar3>=0", "kbar3 = " + fmt(d.kbar3));
    require(d.k5 >= 0.0, "positivity:k5>=0", "k5 = " + fmt(d.k5));
    require(d.k6 >= 0.0, "positivity:k6>=0", "k6 = " + fmt(d.k6));
    require(c.beta > c.L2, "positivity:beta>L2", "beta = " + fmt(c.beta) + ", L2 = " + fmt(c.L2));

    const Coercivity bounds = coercivity_bounds(c);
    require(bounds.lambda > 0.0, "coer", "quadratic form is not positive definite (lambda = " +
                                             fmt(bounds.lambda) + ")");
    return bounds;
}

ReducedCase reduce_case(const ElasticConstants& c) {
    ReducedCase r{CaseTag::C, c, 0.0};
    ElasticConstants& out = r.constants;
    // Adding coeff * div(s^2((grad n)n - (div n)n)) shifts L4 by 2 coeff, L3 by -2 coeff and
    // the saddle-splay combination k2 + k4 by coeff.
    auto absorb = [&](double coeff) {
        r.null_lagrangian_coeff = coeff;
        out.L4 += 2.0 * coeff;
        out.L3 -= 2.0 * coeff;
        out.k4 += coeff;
    };
    if (c.L1 > c.L2) {
        out.beta = c.beta + c.L2;
        out.L1 = c.L1 - c.L2;
        out.L2 = 0.0;
        r.tag = CaseTag::A;
        if (c.L4 != 0.0) absorb(-0.5 * c.L4);
        out.L4 = 0.0;
    } else if (c.L1 < c.L2) {
        out.beta = c.beta + c.L1;
        out.L2 = c.L2 - c.L1;
        out.L1 = 0.0;
        r.tag = CaseTag::B;
        if (c.L3 != 0.0) absorb(0.5 * c.L3);
        out.L3 = 0.0;
    } else {
        out.beta = c.beta + c.L1;
        out.L1 = 0.0;
        out.L2 = 0.0;
        r.tag = CaseTag::C;
        if (c.L3 == 0.0 && c.L4 == 0.0) return r;
        if (c.L4 != -c.L3) {
            throw ValidationError("reduce:no-case", "L1 = L2 needs L3 = L4 = 0 or L4 = -L3 (got L3 = " +
                                                        fmt(c.L3) + ", L4 = " + fmt(c.L4) + ")");
        }
        absorb(0.5 * c.L3);
        out.L3 = 0.0;
        out.L4 = 0.0;
    }
    return r;
}

}  // namespace ericksen
