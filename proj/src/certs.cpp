#include "skolemkit/certs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

namespace skolem {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "skolemkit-cert-v1";

std::string int_str(const Int& v) { return v.get_str(); }

std::string long_str(long v) { return std::to_string(v); }

std::string rat_str(const Rat& v) { return v.get_str(); }

Int parse_int(const json& j, const char* what) {
    if (!j.is_string()) {
        throw InvalidArgument(std::string(what) + " must be a decimal string");
    }
    const std::string& s = j.get_ref<const std::string&>();
    size_t i = s.size() > 0 && s[0] == '-' ? 1 : 0;
    if (i == s.size()) {
        throw InvalidArgument(std::string(what) + " is not a decimal integer");
    }
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
            throw InvalidArgument(std::string(what) + " is not a decimal integer");
        }
    }
    return Int(s);
}

long parse_long(const json& j, const char* what) {
    Int v = parse_int(j, what);
    if (!v.fits_slong_p()) {
        throw InvalidArgument(std::string(what) + " is out of range");
    }
    return v.get_si();
}

Rat parse_rat(const json& j, const char* what) {
    if (!j.is_string()) {
        throw InvalidArgument(std::string(what) + " must be a rational string");
    }
    const std::string& s = j.get_ref<const std::string&>();
    size_t slash = s.find('/');
    if (slash == std::string::npos) {
        return Rat(parse_int(j, what));
    }
    Int num = parse_int(json(s.substr(0, slash)), what);
    Int den = parse_int(json(s.substr(slash + 1)), what);
    if (den <= 0) {
        throw InvalidArgument(std::string(what) + " has a nonpositive denominator");
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

const json& field(const json& obj, const char* key) {
    if (!obj.is_object()) {
        throw InvalidArgument(std::string("expected an object holding \"") + key + "\"");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw InvalidArgument(std::string("missing field \"") + key + "\"");
    }
    return *it;
}

const json& array_field(const json& obj, const char* key) {
    const json& a = field(obj, key);
    if (!a.is_array()) {
        throw InvalidArgument(std::string("field \"") + key + "\" must be an array");
    }
    return a;
}

json rat_list_json(const std::vector<Rat>& v) {
    json a = json::array();
    for (const Rat& x : v) {
        a.push_back(rat_str(x));
    }
    return a;
}

std::vector<Rat> parse_rat_list(const json& a, const char* what) {
    std::vector<Rat> out;
    out.reserve(a.size());
    for (const json& x : a) {
        out.push_back(parse_rat(x, what));
    }
    return out;
}

json poly_json(const PolyQ& f) { return rat_list_json(f.c); }

PolyQ parse_poly(const json& a, const char* what) {
    if (!a.is_array()) {
        throw InvalidArgument(std::string(what) + " must be a coefficient array");
    }
    return PolyQ(parse_rat_list(a, what));
}

json proof_json(const SymbolicZeroProof& pr) {
    json o;
    o["j"] = long_str(pr.j);
    o["h"] = poly_json(pr.h);
    json roots = json::array();
    for (const PolyQ& r : pr.roots) {
        roots.push_back(poly_json(r));
    }
    o["roots"] = roots;
    json alphas = json::array();
    for (const PolyQ& a : pr.alphas) {
        alphas.push_back(poly_json(a));
    }
    o["alphas"] = alphas;
    o["alpha_scale"] = int_str(pr.alpha_scale);
    json indep = json::array();
    for (long i : pr.independent) {
        indep.push_back(long_str(i));
    }
    o["independent"] = indep;
    json rels = json::array();
    for (const ProofRelation& rel : pr.relations) {
        json r;
        r["index"] = long_str(rel.index);
        r["m"] = int_str(rel.m);
        json n = json::array();
        for (const Int& e : rel.n) {
            n.push_back(int_str(e));
        }
        r["n"] = n;
        rels.push_back(r);
    }
    o["relations"] = rels;
    return o;
}

SymbolicZeroProof parse_proof(const json& o) {
    SymbolicZeroProof pr;
    pr.j = parse_long(field(o, "j"), "proof index j");
    pr.h = parse_poly(field(o, "h"), "proof field polynomial");
    for (const json& r : array_field(o, "roots")) {
        pr.roots.push_back(parse_poly(r, "proof root"));
    }
    for (const json& a : array_field(o, "alphas")) {
        pr.alphas.push_back(parse_poly(a, "proof alpha"));
    }
    pr.alpha_scale = parse_int(field(o, "alpha_scale"), "alpha_scale");
    for (const json& i : array_field(o, "independent")) {
        pr.independent.push_back(parse_long(i, "independent index"));
    }
    for (const json& r : array_field(o, "relations")) {
        ProofRelation rel;
        rel.index = parse_long(field(r, "index"), "relation index");
        rel.m = parse_int(field(r, "m"), "relation exponent m");
        for (const json& e : array_field(r, "n")) {
            rel.n.push_back(parse_int(e, "relation exponent"));
        }
        pr.relations.push_back(std::move(rel));
    }
    return pr;
}

json witness_json(const ModulusWitness& w) {
    json o;
    o["type"] = "modulus";
    o["m"] = int_str(w.m);
    o["period"] = int_str(w.period);
    return o;
}

json witness_json(const ValuationWitness& w) {
    json o;
    o["type"] = "valuation";
    o["center"] = int_str(w.center);
    o["p"] = int_str(w.p);
    o["L"] = int_str(w.L);
    o["nu"] = long_str(w.nu);
    o["sum_valuation"] = long_str(w.sum_valuation);
    o["j0"] = long_str(w.j0);
    o["terms"] = long_str(w.terms);
    o["window_scale"] = int_str(w.window_scale);
    json proofs = json::array();
    for (const SymbolicZeroProof& pr : w.zero_proofs) {
        proofs.push_back(proof_json(pr));
    }
    o["zero_proofs"] = proofs;
    return o;
}

json witness_json(const EvaluationWitness& w) {
    json o;
    o["type"] = "evaluation";
    o["p"] = int_str(w.p);
    o["L"] = int_str(w.L);
    o["a"] = long_str(w.a);
    o["valuation"] = long_str(w.valuation);
    return o;
}

}  // namespace

std::string serialize(const Certificate& cert) {
    json root;
    root["format"] = kFormat;
    json input;
    input["coefficients"] = rat_list_json(cert.coefficients);
    input["initial"] = rat_list_json(cert.initial);
    root["input"] = input;
    json zeros = json::array();
    for (const Int& z : cert.zeros) {
        zeros.push_back(int_str(z));
    }
    root["zeros"] = zeros;
    json entries = json::array();
    for (const ProgressionEntry& e : cert.entries) {
        json o;
        o["modulus"] = int_str(e.modulus);
        o["residue"] = int_str(e.residue);
        o["witness"] = std::visit([](const auto& w) { return witness_json(w); }, e.witness);
        entries.push_back(o);
    }
    root["entries"] = entries;
    return root.dump(2) + "\n";
}

Certificate parse_certificate(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("certificate is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw InvalidArgument("certificate must be a JSON object");
    }
    const json& fmt = field(root, "format");
    if (!fmt.is_string() || fmt.get_ref<const std::string&>() != kFormat) {
        throw InvalidArgument("unsupported certificate format");
    }
    Certificate cert;
    const json& input = field(root, "input");
    cert.coefficients = parse_rat_list(array_field(input, "coefficients"), "coefficient");
    cert.initial = parse_rat_list(array_field(input, "initial"), "initial value");
    for (const json& z : array_field(root, "zeros")) {
        cert.zeros.push_back(parse_int(z, "zero"));
    }
    for (const json& e : array_field(root, "entries")) {
        ProgressionEntry entry;
        entry.modulus = parse_int(field(e, "modulus"), "entry modulus");
        entry.residue = parse_int(field(e, "residue"), "entry residue");
        const json& w = field(e, "witness");
        const json& type = field(w, "type");
        if (!type.is_string()) {
            throw InvalidArgument("witness type must be a string");
        }
        const std::string& t = type.get_ref<const std::string&>();
        if (t == "modulus") {
            ModulusWitness mw;
            mw.m = parse_int(field(w, "m"), "witness modulus m");
            mw.period = parse_int(field(w, "period"), "witness period");
            entry.witness = std::move(mw);
        } else if (t == "valuation") {
            ValuationWitness vw;
            vw.center = parse_int(field(w, "center"), "witness center");
            vw.p = parse_int(field(w, "p"), "witness prime");
            vw.L = parse_int(field(w, "L"), "witness stride");
            vw.nu = parse_long(field(w, "nu"), "witness nu");
            vw.sum_valuation = parse_long(field(w, "sum_valuation"), "witness sum_valuation");
            vw.j0 = parse_long(field(w, "j0"), "witness j0");
            vw.terms = parse_long(field(w, "terms"), "witness terms");
            vw.window_scale = parse_int(field(w, "window_scale"), "witness window_scale");
            for (const json& pr : array_field(w, "zero_proofs")) {
                vw.zero_proofs.push_back(parse_proof(pr));
            }
            entry.witness = std::move(vw);
        } else if (t == "evaluation") {
            EvaluationWitness ew;
            ew.p = parse_int(field(w, "p"), "witness prime");
            ew.L = parse_int(field(w, "L"), "witness stride");
            ew.a = parse_long(field(w, "a"), "witness level");
            ew.valuation = parse_long(field(w, "valuation"), "witness valuation");
            entry.witness = std::move(ew);
        } else {
            throw InvalidArgument("unknown witness type \"" + t + "\"");
        }
        cert.entries.push_back(std::move(entry));
    }
    return cert;
}

bool coverage_check(const std::vector<ProgressionEntry>& entries) {
    if (entries.empty() || entries.size() > (1u << 20)) {
        return false;
    }
    Rat density = 0;
    std::map<Int, std::vector<Int>> groups;
    for (const ProgressionEntry& e : entries) {
        if (e.modulus < 1 || e.residue < 0 || e.residue >= e.modulus) {
            return false;
        }
        density += Rat(1) / Rat(e.modulus);
        groups[e.modulus].push_back(e.residue);
    }
    if (density != 1) {
        return false;
    }
    for (auto& [m, rs] : groups) {
        std::set<Int> seen(rs.begin(), rs.end());
        if (seen.size() != rs.size()) {
            return false;
        }
    }
    for (auto i = groups.begin(); i != groups.end(); ++i) {
        for (auto j = std::next(i); j != groups.end(); ++j) {
            Int g = gcd(i->first, j->first);
            std::set<Int> small;
            for (const Int& r : i->second) {
                small.insert(mod_pos(r, g));
            }
            for (const Int& r : j->second) {
                if (small.count(mod_pos(r, g))) {
                    return false;
                }
            }
        }
    }
    return true;
}

namespace {

struct Fail {
    std::string reason;
};

[[noreturn]] void fail(std::string reason) { throw Fail{std::move(reason)}; }

constexpr long kMaxOrder = 64;
constexpr long kMaxTerms = 1 << 20;
constexpr long kMaxLevel = 64;
constexpr long kMaxFieldDegree = 64;
const Int kMaxPeriod = Int(1) << 22;
const Int kMaxExactIndex = Int(1) << 21;
const Int kMaxProofStride = Int(1) << 20;
const Int kMaxExponent = Int(1) << 20;

// ---------- recomputed root recurrence ----------

// integral minimal recurrence for the sequence n -> s * ell^n * u_n, which
// shares the zero set of u; coefficients and window are rebuilt from the echo
// alone so every later check replays against the verifier's own sequence
struct RootSeq {
    std::vector<Int> c;
    std::vector<Int> wD;
    Int D{1};
    long d = 0;
    MatZ A;
    MatZ adj;
    Int det;
    Int cd;
    PolyQ g;
};

Rat rat_lcm_den(const std::vector<Rat>& v) {
    Int ell = 1;
    for (const Rat& x : v) {
        ell = lcm(ell, Int(x.get_den()));
    }
    return Rat(ell);
}

std::vector<Rat> forward_terms(const std::vector<Rat>& coeffs, const std::vector<Rat>& init,
                               long count) {
    long d = static_cast<long>(coeffs.size());
    std::vector<Rat> t(init.begin(), init.end());
    t.reserve(static_cast<size_t>(count));
    while (static_cast<long>(t.size()) < count) {
        Rat v = 0;
        long n = static_cast<long>(t.size());
        for (long k = 1; k <= d; ++k) {
            v += coeffs[static_cast<size_t>(k - 1)] * t[static_cast<size_t>(n - k)];
        }
        v.canonicalize();
        t.push_back(v);
    }
    return t;
}

std::pair<MatZ, Int> integer_adjugate(const MatZ& A) {
    long n = A.n;
    std::vector<std::vector<Rat>> m(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(2 * n)));
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(A.at(i, j));
        }
        m[static_cast<size_t>(i)][static_cast<size_t>(n + i)] = 1;
    }
    Rat det = 1;
    for (long col = 0; col < n; ++col) {
        long piv = -1;
        for (long r = col; r < n; ++r) {
            if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0) {
            fail("root companion matrix is singular");
        }
        if (piv != col) {
            std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(col)]);
            det = -det;
        }
        Rat pv = m[static_cast<size_t>(col)][static_cast<size_t>(col)];
        det *= pv;
        for (long j = 0; j < 2 * n; ++j) {
            m[static_cast<size_t>(col)][static_cast<size_t>(j)] /= pv;
        }
        for (long r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            Rat f = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (f == 0) {
                continue;
            }
            for (long j = col; j < 2 * n; ++j) {
                m[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(col)][static_cast<size_t>(j)];
            }
        }
    }
    det.canonicalize();
    MatZ adj(n);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            Rat v = m[static_cast<size_t>(i)][static_cast<size_t>(n + j)] * det;
            v.canonicalize();
            if (v.get_den() != 1) {
                throw InternalError("adjugate entries must be integral");
            }
            adj.at(i, j) = v.get_num();
        }
    }
    return {adj, det.get_num()};
}

RootSeq derive_root(const std::vector<Rat>& coeffs, const std::vector<Rat>& init) {
    long d = static_cast<long>(coeffs.size());
    if (d < 1 || d > kMaxOrder) {
        fail("recurrence order is out of range");
    }
    if (static_cast<long>(init.size()) != d) {
        fail("window length differs from the recurrence order");
    }
    if (coeffs[static_cast<size_t>(d - 1)] == 0) {
        fail("trailing recurrence coefficient is zero");
    }

    Rat ell = rat_lcm_den(coeffs);
    std::vector<Rat> nc(static_cast<size_t>(d));
    Rat lp = 1;
    for (long j = 1; j <= d; ++j) {
        lp *= ell;
        Rat x = coeffs[static_cast<size_t>(j - 1)] * lp;
        x.canonicalize();
        nc[static_cast<size_t>(j - 1)] = x;
    }
    std::vector<Rat> scaled(static_cast<size_t>(d));
    lp = 1;
    for (long j = 0; j < d; ++j) {
        Rat v = init[static_cast<size_t>(j)] * lp;
        v.canonicalize();
        scaled[static_cast<size_t>(j)] = v;
        lp *= ell;
    }
    Rat sc = ell * rat_lcm_den(scaled);
    std::vector<Rat> nw(static_cast<size_t>(d));
    for (long j = 0; j < d; ++j) {
        Rat v = scaled[static_cast<size_t>(j)] * sc;
        v.canonicalize();
        nw[static_cast<size_t>(j)] = v;
    }

    std::vector<Rat> t = forward_terms(nc, nw, 2 * d + 1);
    bool all_zero = true;
    for (const Rat& v : t) {
        if (v != 0) {
            all_zero = false;
        }
    }
    if (all_zero) {
        fail("sequence vanishes identically on the checked window");
    }

    for (long r = 1; r <= d; ++r) {
        std::vector<std::vector<Rat>> H(static_cast<size_t>(r), std::vector<Rat>(static_cast<size_t>(r)));
        std::vector<Rat> rhs(static_cast<size_t>(r));
        for (long i = 0; i < r; ++i) {
            for (long j = 0; j < r; ++j) {
                H[static_cast<size_t>(i)][static_cast<size_t>(j)] = t[static_cast<size_t>(i + j)];
            }
            rhs[static_cast<size_t>(i)] = t[static_cast<size_t>(i + r)];
        }
        auto a = linsolve_rat(std::move(H), std::move(rhs));
        if (!a || (*a)[0] == 0) {
            continue;
        }
        std::vector<Rat> mc(static_cast<size_t>(r));
        for (long k = 1; k <= r; ++k) {
            mc[static_cast<size_t>(k - 1)] = (*a)[static_cast<size_t>(r - k)];
        }
        bool ok = true;
        for (long n = r; n <= 2 * d && ok; ++n) {
            Rat pred = 0;
            for (long k = 1; k <= r; ++k) {
                pred += mc[static_cast<size_t>(k - 1)] * t[static_cast<size_t>(n - k)];
            }
            if (pred != t[static_cast<size_t>(n)]) {
                ok = false;
            }
        }
        if (!ok) {
            continue;
        }

        RootSeq R;
        R.d = r;
        R.c.resize(static_cast<size_t>(r));
        for (long k = 0; k < r; ++k) {
            if (mc[static_cast<size_t>(k)].get_den() != 1) {
                fail("root recurrence is not integral");
            }
            R.c[static_cast<size_t>(k)] = mc[static_cast<size_t>(k)].get_num();
        }
        R.cd = R.c.back();
        R.D = 1;
        for (long k = 0; k < r; ++k) {
            R.D = lcm(R.D, Int(t[static_cast<size_t>(k)].get_den()));
        }
        R.wD.resize(static_cast<size_t>(r));
        for (long k = 0; k < r; ++k) {
            Rat v = t[static_cast<size_t>(k)] * Rat(R.D);
            v.canonicalize();
            R.wD[static_cast<size_t>(k)] = v.get_num();
        }
        R.A = MatZ(r);
        for (long j = 0; j < r; ++j) {
            R.A.at(0, j) = R.c[static_cast<size_t>(j)];
        }
        for (long i = 1; i < r; ++i) {
            R.A.at(i, i - 1) = 1;
        }
        auto [adj, det] = integer_adjugate(R.A);
        R.adj = std::move(adj);
        R.det = det;
        std::vector<Rat> gc(static_cast<size_t>(r) + 1);
        gc[static_cast<size_t>(r)] = 1;
        for (long k = 1; k <= r; ++k) {
            gc[static_cast<size_t>(r - k)] = -Rat(R.c[static_cast<size_t>(k - 1)]);
        }
        R.g = PolyQ(std::move(gc));
        return R;
    }
    fail("echo terms admit no generating recurrence");
}

// exact value of the root sequence at n, as A^n (or adj^|n| over det^|n|)
// applied to the scaled window
Rat term_exact(const RootSeq& R, const Int& n) {
    Int a = n >= 0 ? n : -n;
    if (a > kMaxExactIndex) {
        throw ResourceLimit("exact evaluation at index " + n.get_str() + " is beyond the verifier budget");
    }
    MatZ P = n >= 0 ? mat_pow(R.A, a) : mat_pow(R.adj, a);
    std::vector<Int> st(static_cast<size_t>(R.d));
    for (long i = 0; i < R.d; ++i) {
        st[static_cast<size_t>(i)] = R.wD[static_cast<size_t>(R.d - 1 - i)];
    }
    Int num = mat_vec(P, st).back();
    Rat den = Rat(R.D);
    if (n < 0) {
        Int dp;
        mpz_pow_ui(dp.get_mpz_t(), R.det.get_mpz_t(), a.get_ui());
        den *= Rat(dp);
    }
    Rat v = Rat(num) / den;
    v.canonicalize();
    return v;
}

// scaled state (D u_{n+d-1}, .., D u_n) mod q; gcd(det, q) = 1 required when
// n is negative
std::vector<Int> state_mod_q(const RootSeq& R, const Int& n, const Int& q) {
    std::vector<Int> st(static_cast<size_t>(R.d));
    for (long i = 0; i < R.d; ++i) {
        st[static_cast<size_t>(i)] = mod_pos(R.wD[static_cast<size_t>(R.d - 1 - i)], q);
    }
    MatZ T;
    if (n >= 0) {
        T = mat_pow_mod(R.A, n, q);
    } else {
        Int di = mod_inverse(mod_pos(R.det, q), q);
        MatZ inv = mat_mod(R.adj, q);
        for (long i = 0; i < R.d; ++i) {
            for (long j = 0; j < R.d; ++j) {
                inv.at(i, j) = mod_pos(inv.at(i, j) * di, q);
            }
        }
        T = mat_pow_mod(inv, -n, q);
    }
    std::vector<Int> out = mat_vec(T, st);
    for (Int& v : out) {
        v = mod_pos(v, q);
    }
    return out;
}

long read_valuation(const Int& v, const Int& p) {
    Int x = v;
    long e = 0;
    while (x % p == 0) {
        x /= p;
        e += 1;
    }
    return e;
}

long tail_floor(long K, const Int& p) {
    long best = -1;
    for (long k = K + 1;; ++k) {
        if (best >= 0 && Int(k) * (p - 2) + 1 >= Int(best) * (p - 1)) {
            break;
        }
        long e = k - factorial_valuation(static_cast<unsigned long>(k), p);
        if (best < 0 || e < best) {
            best = e;
        }
    }
    return best;
}

// ---------- field arithmetic mod h ----------

struct FieldCtx {
    PolyQ h;
};

PolyQ fe_red(const PolyQ& x, const FieldCtx& K) { return divrem(x, K.h).second; }

PolyQ fe_mul(const PolyQ& a, const PolyQ& b, const FieldCtx& K) { return fe_red(a * b, K); }

PolyQ fe_inv(const PolyQ& a, const FieldCtx& K) {
    PolyQ r0 = K.h, r1 = fe_red(a, K);
    PolyQ s0, s1{std::vector<Rat>{Rat(1)}};
    while (!r1.is_zero()) {
        auto [q, r2] = divrem(r0, r1);
        PolyQ s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (r0.degree() != 0) {
        fail("proof element is not invertible modulo h");
    }
    return fe_red(Rat(1) / r0.c[0] * s0, K);
}

PolyQ fe_pow(const PolyQ& a, const Int& e, const FieldCtx& K) {
    PolyQ base = e >= 0 ? fe_red(a, K) : fe_inv(a, K);
    Int n = e >= 0 ? e : -e;
    PolyQ acc{std::vector<Rat>{Rat(1)}};
    while (n > 0) {
        if (n % 2 == 1) {
            acc = fe_mul(acc, base, K);
        }
        base = fe_mul(base, base, K);
        n /= 2;
    }
    return acc;
}

PolyQ fe_eval_poly(const PolyQ& f, const PolyQ& x, const FieldCtx& K) {
    PolyQ acc;
    for (int k = f.degree(); k >= 0; --k) {
        acc = fe_red(acc * x, K);
        acc = acc + PolyQ(std::vector<Rat>{f.coeff(k)});
    }
    return fe_red(acc, K);
}

// char poly of an integer matrix by the trace recursion, monic ascending
PolyQ charpoly_int(const MatZ& M) {
    long n = M.n;
    std::vector<std::vector<Rat>> N(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n)));
    for (long i = 0; i < n; ++i) {
        N[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    }
    std::vector<Rat> coef(static_cast<size_t>(n) + 1);
    coef[static_cast<size_t>(n)] = 1;
    for (long k = 1; k <= n; ++k) {
        std::vector<std::vector<Rat>> MN(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n)));
        for (long i = 0; i < n; ++i) {
            for (long j = 0; j < n; ++j) {
                Rat v = 0;
                for (long l = 0; l < n; ++l) {
                    v += Rat(M.at(i, l)) * N[static_cast<size_t>(l)][static_cast<size_t>(j)];
                }
                v.canonicalize();
                MN[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
            }
        }
        Rat tr = 0;
        for (long i = 0; i < n; ++i) {
            tr += MN[static_cast<size_t>(i)][static_cast<size_t>(i)];
        }
        Rat ak = -tr / Rat(k);
        ak.canonicalize();
        coef[static_cast<size_t>(n - k)] = ak;
        for (long i = 0; i < n; ++i) {
            MN[static_cast<size_t>(i)][static_cast<size_t>(i)] += ak;
        }
        N = std::move(MN);
    }
    return PolyQ(std::move(coef));
}

// ---------- witness replays ----------

void check_modulus(const RootSeq& R, const ProgressionEntry& entry, const ModulusWitness& w) {
    if (w.m < 2) {
        fail("modulus witness needs m >= 2");
    }
    if (w.period < 1 || w.period > kMaxPeriod) {
        fail("modulus witness period is out of range");
    }
    if (gcd(w.m, R.cd) != 1) {
        fail("witness modulus shares a factor with the trailing coefficient");
    }
    if (gcd(w.m, R.D) != 1) {
        fail("witness modulus shares a factor with the window denominator");
    }
    MatZ P = mat_pow_mod(R.A, entry.modulus, w.m);
    std::vector<Int> x0 = state_mod_q(R, entry.residue, w.m);
    std::vector<Int> x = x0;
    for (Int t = 0; t < w.period; ++t) {
        if (x.back() % w.m == 0) {
            fail("progression value vanishes mod the witness modulus");
        }
        x = mat_vec(P, x);
        for (Int& v : x) {
            v = mod_pos(v, w.m);
        }
    }
    if (x != x0) {
        fail("claimed period does not return the state mod m");
    }
}

void check_evaluation(const RootSeq& R, const ProgressionEntry& entry, const EvaluationWitness& w) {
    if (w.p < 3 || w.p % 2 == 0 || !is_probable_prime(w.p)) {
        fail("evaluation witness prime is not an odd prime");
    }
    if (w.L < 1) {
        fail("evaluation witness stride must be positive");
    }
    if (w.a < 1 || w.a > kMaxLevel) {
        fail("evaluation witness level is out of range");
    }
    if (w.valuation < 0 || w.valuation > w.a) {
        fail("evaluation witness valuation must lie in [0, a]");
    }
    if (entry.modulus != w.L * pow_int(w.p, static_cast<unsigned long>(w.a))) {
        fail("entry modulus differs from L p^a");
    }
    if (gcd(R.cd, w.p) != 1 || gcd(R.D, w.p) != 1) {
        fail("evaluation witness prime divides the trailing coefficient or window denominator");
    }
    if (!mat_is_identity_mod(mat_pow_mod(R.A, w.L, w.p), w.p)) {
        fail("A^L is not the identity mod p");
    }
    Int q = pow_int(w.p, static_cast<unsigned long>(w.a + 1));
    Int v = state_mod_q(R, entry.residue, q).back();
    if (v == 0 || read_valuation(v, w.p) != w.valuation) {
        fail("recomputed valuation along the progression does not match");
    }
}

Int check_admissible(const RootSeq& R, const Int& p) {
    if (p < 3 || p % 2 == 0 || !is_probable_prime(p)) {
        fail("jump prime is not an odd prime");
    }
    if (R.cd % p == 0) {
        fail("jump prime divides the trailing coefficient");
    }
    PolyQ gp = poly_gcd(R.g, derivative(R.g));
    if (gp.degree() != 0) {
        fail("root characteristic polynomial is not squarefree");
    }
    Rat disc = discriminant(R.g);
    if (disc.get_num() % p == 0) {
        fail("jump prime divides the discriminant");
    }
    if (!splits_completely_mod_p(R.g, p)) {
        fail("root characteristic polynomial does not split mod p");
    }
    Int ord = 1;
    for (const Int& r : roots_mod_p(polym_from(R.g, p), p)) {
        ord = lcm(ord, multiplicative_order_mod_p(r, p));
    }
    return ord;
}

struct ProofSetting {
    const RootSeq* R;
    FieldCtx K;
    PolyQ G;
    std::vector<Rat> subseq;
    Int center;
    Int L;
};

void check_proof(const ProofSetting& ps, const SymbolicZeroProof& pr, long expect_j) {
    if (pr.j != expect_j) {
        fail("zero proofs do not cover 1..j0-1 in order");
    }
    const PolyQ& h = pr.h;
    if (h.degree() < 1 || h.degree() > kMaxFieldDegree || h.lc() != 1) {
        fail("proof field polynomial must be monic and nonconstant");
    }
    for (const Rat& c : h.c) {
        if (c.get_den() != 1) {
            fail("proof field polynomial must have integer coefficients");
        }
    }
    long s = static_cast<long>(pr.roots.size());
    if (s < 1 || s > kMaxOrder || pr.alphas.size() != pr.roots.size()) {
        fail("proof root and alpha lists are inconsistent");
    }
    if (pr.alpha_scale < 1) {
        fail("alpha scale must be positive");
    }

    std::vector<char> covered(static_cast<size_t>(s), 0);
    for (long i : pr.independent) {
        if (i < 0 || i >= s || covered[static_cast<size_t>(i)]) {
            fail("independent root indices are out of range or repeated");
        }
        covered[static_cast<size_t>(i)] = 1;
    }
    long t = static_cast<long>(pr.independent.size());
    for (const ProofRelation& rel : pr.relations) {
        if (rel.index < 0 || rel.index >= s || covered[static_cast<size_t>(rel.index)]) {
            fail("relation indices are out of range or repeated");
        }
        covered[static_cast<size_t>(rel.index)] = 1;
        if (rel.m < 1 || rel.m > kMaxExponent) {
            fail("relation exponent m is out of range");
        }
        if (static_cast<long>(rel.n.size()) > t) {
            fail("relation exponent vector is longer than the basis");
        }
        for (const Int& e : rel.n) {
            if (e > kMaxExponent || e < -kMaxExponent) {
                fail("relation exponent is out of range");
            }
        }
    }
    for (long i = 0; i < s; ++i) {
        if (!covered[static_cast<size_t>(i)]) {
            fail("every root must be independent or carry a relation");
        }
    }

    const FieldCtx& K = ps.K;
    std::vector<PolyQ> roots(static_cast<size_t>(s)), alphas(static_cast<size_t>(s));
    for (long i = 0; i < s; ++i) {
        roots[static_cast<size_t>(i)] = fe_red(pr.roots[static_cast<size_t>(i)], K);
        alphas[static_cast<size_t>(i)] = fe_red(pr.alphas[static_cast<size_t>(i)], K);
    }

    for (long i = 0; i < s; ++i) {
        if (!fe_eval_poly(ps.G, roots[static_cast<size_t>(i)], K).is_zero()) {
            fail("claimed root does not satisfy the stride characteristic polynomial");
        }
    }

    long d = ps.R->d;
    std::vector<PolyQ> pw(static_cast<size_t>(s), PolyQ(std::vector<Rat>{Rat(1)}));
    for (long tt = 0; tt <= d; ++tt) {
        PolyQ lhs;
        for (long i = 0; i < s; ++i) {
            lhs = lhs + fe_mul(alphas[static_cast<size_t>(i)], pw[static_cast<size_t>(i)], K);
        }
        lhs = fe_red(lhs, K);
        Rat rhsv = Rat(pr.alpha_scale) * ps.subseq[static_cast<size_t>(tt)];
        rhsv.canonicalize();
        PolyQ rhs(std::vector<Rat>{rhsv});
        if (!(lhs == rhs)) {
            fail("alphas do not reproduce the strided subsequence");
        }
        for (long i = 0; i < s; ++i) {
            pw[static_cast<size_t>(i)] = fe_mul(pw[static_cast<size_t>(i)], roots[static_cast<size_t>(i)], K);
        }
    }

    for (const ProofRelation& rel : pr.relations) {
        PolyQ lhs = fe_pow(roots[static_cast<size_t>(rel.index)], rel.m, K);
        PolyQ rhs{std::vector<Rat>{Rat(1)}};
        for (size_t u = 0; u < rel.n.size(); ++u) {
            if (rel.n[u] == 0) {
                continue;
            }
            rhs = fe_mul(rhs, fe_pow(roots[static_cast<size_t>(pr.independent[u])], rel.n[u], K), K);
        }
        if (!(lhs == rhs)) {
            fail("multiplicative relation does not hold in the proof field");
        }
    }

    std::vector<std::vector<Rat>> forms(static_cast<size_t>(s), std::vector<Rat>(static_cast<size_t>(t), Rat(0)));
    for (long u = 0; u < t; ++u) {
        forms[static_cast<size_t>(pr.independent[static_cast<size_t>(u)])][static_cast<size_t>(u)] = 1;
    }
    for (const ProofRelation& rel : pr.relations) {
        for (size_t u = 0; u < rel.n.size(); ++u) {
            Rat q(rel.n[u], rel.m);
            q.canonicalize();
            forms[static_cast<size_t>(rel.index)][u] = q;
        }
    }

    long j = pr.j;
    if (t == 0) {
        return;
    }
    Int jfact = factorial_int(static_cast<unsigned long>(j));
    std::vector<long> k(static_cast<size_t>(t), 0);
    std::function<void(long, long)> walk = [&](long pos, long rem) {
        if (pos == t - 1) {
            k[static_cast<size_t>(pos)] = rem;
            Int mult = jfact;
            for (long u = 0; u < t; ++u) {
                mult /= factorial_int(static_cast<unsigned long>(k[static_cast<size_t>(u)]));
            }
            PolyQ c;
            for (long i = 0; i < s; ++i) {
                Rat scalar = Rat(mult);
                for (long u = 0; u < t; ++u) {
                    for (long e = 0; e < k[static_cast<size_t>(u)]; ++e) {
                        scalar *= forms[static_cast<size_t>(i)][static_cast<size_t>(u)];
                    }
                }
                if (scalar == 0) {
                    continue;
                }
                scalar.canonicalize();
                c = c + scalar * alphas[static_cast<size_t>(i)];
            }
            if (!fe_red(c, K).is_zero()) {
                fail("expanded series coefficient below j0 is nonzero");
            }
            return;
        }
        for (long v = rem; v >= 0; --v) {
            k[static_cast<size_t>(pos)] = v;
            walk(pos + 1, rem - v);
        }
    };
    walk(0, j);
}

void check_valuation(const RootSeq& R, const ProgressionEntry& entry, const ValuationWitness& w) {
    if (w.nu < 0 || w.nu > kMaxLevel) {
        fail("valuation witness nu is out of range");
    }
    if (w.sum_valuation < 0) {
        fail("valuation witness sum_valuation must be nonnegative");
    }
    if (w.j0 < 1 || w.j0 > kMaxLevel) {
        fail("valuation witness j0 is out of range");
    }
    if (w.terms < w.j0 || w.terms > kMaxTerms) {
        fail("valuation witness term count is out of range");
    }
    if (w.L < 1) {
        fail("valuation witness stride must be positive");
    }
    if (entry.modulus != w.L * pow_int(w.p, static_cast<unsigned long>(w.nu + 1))) {
        fail("entry modulus differs from L p^(nu+1)");
    }
    if (entry.residue != mod_pos(w.center, entry.modulus)) {
        fail("entry residue differs from the center residue");
    }

    Int ord = check_admissible(R, w.p);
    if (w.L % ord != 0) {
        fail("stride is not a multiple of the matrix order mod p");
    }
    if (gcd(R.D, w.p) != 1) {
        fail("jump prime divides the window denominator");
    }
    if (w.window_scale != R.D) {
        fail("window scale does not match the recomputed denominator");
    }

    long target = w.sum_valuation + factorial_valuation(static_cast<unsigned long>(w.terms), w.p);
    Int q = pow_int(w.p, static_cast<unsigned long>(target + 2));
    Int q1 = q * w.p;
    MatZ ALq = mat_pow_mod(R.A, w.L, q1);
    MatZ B(R.d);
    for (long i = 0; i < R.d; ++i) {
        for (long j = 0; j < R.d; ++j) {
            Int v = ALq.at(i, j);
            if (i == j) {
                v -= 1;
            }
            v = mod_pos(v, q1);
            if (v % w.p != 0) {
                fail("A^L is not congruent to the identity mod p");
            }
            B.at(i, j) = mod_pos(v / w.p, q);
        }
    }

    std::vector<Int> cur = state_mod_q(R, w.center, q);
    std::vector<Int> scol(static_cast<size_t>(w.j0) + 1, Int(0));
    scol[0] = 1;
    Int N = 0;
    Int pk = 1;
    for (long K = 1; K <= w.terms; ++K) {
        long top = std::min<long>(w.j0, K);
        for (long j = top; j >= 1; --j) {
            scol[static_cast<size_t>(j)] =
                mod_pos(scol[static_cast<size_t>(j - 1)] - Int(K - 1) * scol[static_cast<size_t>(j)], q);
        }
        scol[0] = mod_pos(-Int(K - 1) * scol[0], q);
        cur = mat_vec(B, cur);
        for (Int& v : cur) {
            v = mod_pos(v, q);
        }
        pk = mod_pos(pk * w.p, q);
        N = mod_pos(N * K + scol[static_cast<size_t>(w.j0)] * cur.back() * pk, q);
    }
    if (N == 0) {
        fail("partial sum is unreadable at the claimed precision");
    }
    if (read_valuation(N, w.p) != target) {
        fail("partial sum valuation does not match the claim");
    }
    long tb = tail_floor(w.terms, w.p);
    if (w.sum_valuation >= tb) {
        fail("tail bound does not dominate the partial sum");
    }

    long e = w.nu + 1;
    for (long j = w.j0 + 1;; ++j) {
        long beta = tail_floor(j - 1, w.p);
        if (beta > w.sum_valuation) {
            break;
        }
        if (beta + e * (j - w.j0) <= w.sum_valuation) {
            fail("higher series coefficients are not dominated");
        }
    }

    if (static_cast<long>(w.zero_proofs.size()) != w.j0 - 1) {
        fail("zero proofs do not cover 1..j0-1");
    }
    if (w.zero_proofs.empty()) {
        return;
    }

    if (w.L > kMaxProofStride) {
        throw ResourceLimit("proof stride " + w.L.get_str() + " is beyond the verifier budget");
    }
    ProofSetting ps;
    ps.R = &R;
    ps.center = w.center;
    ps.L = w.L;
    MatZ AL = mat_pow(R.A, w.L);
    MatZ pB = AL;
    for (long i = 0; i < R.d; ++i) {
        pB.at(i, i) -= 1;
    }
    if (!mat_div_exact(pB, w.p)) {
        fail("A^L - I is not divisible by p");
    }
    PolyQ H = charpoly_int(pB);
    for (long kk = 0; kk < R.d; ++kk) {
        Rat c = H.coeff(static_cast<int>(kk));
        if (c.get_den() != 1 || c.get_num() % pow_int(w.p, static_cast<unsigned long>(R.d - kk)) != 0) {
            fail("eigenvalues of A^L are not principal units");
        }
    }
    PolyQ x_minus_one(std::vector<Rat>{Rat(-1), Rat(1)});
    ps.G = compose(H, x_minus_one);

    Int top_index = w.center + w.L * Int(R.d);
    if (top_index > kMaxExactIndex || w.center < -kMaxExactIndex) {
        throw ResourceLimit("proof subsequence reaches beyond the verifier budget");
    }
    ps.subseq.resize(static_cast<size_t>(R.d) + 1);
    for (long tt = 0; tt <= R.d; ++tt) {
        ps.subseq[static_cast<size_t>(tt)] = term_exact(R, w.center + w.L * Int(tt));
    }

    for (long j = 1; j < w.j0; ++j) {
        const SymbolicZeroProof& pr = w.zero_proofs[static_cast<size_t>(j - 1)];
        ps.K = FieldCtx{pr.h};
        check_proof(ps, pr, j);
    }
}

void run_verify(const std::vector<Rat>& coefficients, const std::vector<Rat>& initial,
                const Certificate& cert) {
    if (cert.coefficients != coefficients || cert.initial != initial) {
        fail("input echo does not match the given sequence");
    }
    RootSeq R = derive_root(coefficients, initial);

    if (cert.entries.size() > (1u << 20)) {
        throw ResourceLimit("certificate has too many entries");
    }
    for (const ProgressionEntry& e : cert.entries) {
        if (e.modulus < 1 || e.residue < 0 || e.residue >= e.modulus) {
            fail("entry residue is out of range");
        }
    }
    if (!coverage_check(cert.entries)) {
        fail("progressions do not partition the integers");
    }

    std::vector<Int> centers;
    for (const ProgressionEntry& e : cert.entries) {
        if (const auto* vw = std::get_if<ValuationWitness>(&e.witness)) {
            centers.push_back(vw->center);
        }
    }
    std::sort(centers.begin(), centers.end());
    for (size_t i = 1; i < cert.zeros.size(); ++i) {
        if (cert.zeros[i] <= cert.zeros[i - 1]) {
            fail("zeros must be strictly increasing");
        }
    }
    if (centers != cert.zeros) {
        fail("zeros do not match the valuation centers");
    }
    for (const Int& z : cert.zeros) {
        if (term_exact(R, z) != 0) {
            fail("claimed zero is not a zero of the sequence");
        }
    }

    for (const ProgressionEntry& e : cert.entries) {
        std::visit(
            [&](const auto& w) {
                using W = std::decay_t<decltype(w)>;
                if constexpr (std::is_same_v<W, ModulusWitness>) {
                    check_modulus(R, e, w);
                } else if constexpr (std::is_same_v<W, ValuationWitness>) {
                    check_valuation(R, e, w);
                } else {
                    check_evaluation(R, e, w);
                }
            },
            e.witness);
    }
}

}  // namespace

VerifyResult verify(const std::vector<Rat>& coefficients, const std::vector<Rat>& initial,
                    const Certificate& cert) {
    try {
        run_verify(coefficients, initial, cert);
        return {true, ""};
    } catch (const Fail& f) {
        return {false, f.reason};
    } catch (const ResourceLimit& e) {
        return {false, std::string("resource limit: ") + e.what()};
    } catch (const InvalidArgument& e) {
        return {false, std::string("malformed certificate: ") + e.what()};
    }
}

}  // namespace skolem
