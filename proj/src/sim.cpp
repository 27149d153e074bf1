#include "radionet/sim.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "radionet/util.hpp"

namespace radionet {

const char* kind_name(Payload::Kind k) {
    switch (k) {
        case Payload::Kind::broadcast: return "broadcast";
        case Payload::Kind::feedback: return "feedback";
        case Payload::Kind::stop: return "stop";
        case Payload::Kind::t1: return "t1";
        case Payload::Kind::gather: return "gather";
    }
    return "?";
}

std::string Payload::canonical() const {
    std::ostringstream os;
    os << kind_name(kind) << '|' << msg_id << '|' << sender_lev << '|' << stay << go << fast << rescue
       << '|' << value << '|' << d_value << '|' << logn_value << '|' << level_value << '|' << h2_value
       << '|' << s_value << '|';
    for (auto m : messages) os << m << ',';
    return os.str();
}

std::uint64_t Payload::digest() const { return fnv1a(canonical()); }

std::string Trace::step_name(long round) const {
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        if (round >= it->start) {
            long rel = round - it->start;
            return it->step_names[static_cast<std::size_t>(rel % it->block_len)];
        }
    }
    return "round";
}

Trace run(const Graph& g, const std::vector<std::unique_ptr<NodeProgram>>& programs, long horizon) {
    const int n = g.node_count();
    RN_CHECK(static_cast<int>(programs.size()) == n, "run: one program per node required");
    RN_CHECK(horizon >= 1, "run: horizon must be >= 1");
    Trace trace;
    trace.rounds = horizon;
    trace.per_round.resize(static_cast<std::size_t>(horizon));

    std::vector<char> transmits(n);
    std::vector<Payload> out(n);
    for (long t = 0; t < horizon; ++t) {
        auto& rec = trace.per_round[static_cast<std::size_t>(t)];
        for (Node v = 0; v < n; ++v) {
            Action a = programs[v]->on_round(t);
            transmits[v] = a.transmit ? 1 : 0;
            if (a.transmit) {
                out[v] = std::move(a.msg);
                rec.tx.push_back({v, out[v].kind, out[v].sender_lev, out[v].digest()});
            }
        }
        for (Node v = 0; v < n; ++v) {
            Reception r;
            if (!transmits[v]) {
                Node sender = -1;
                int count = 0;
                for (Node u : g.neighbors(v)) {
                    if (transmits[u]) {
                        ++count;
                        sender = u;
                        if (count > 1) break;
                    }
                }
                if (count == 1) {
                    r.is_message = true;
                    r.msg = out[sender];
                    rec.rx.push_back({v, r.msg.kind, r.msg.sender_lev, r.msg.digest()});
                }
            }
            programs[v]->on_reception(t, r);
        }
    }
    return trace;
}

ReplayResult replay(const Trace& recorded, const Graph& g,
                    const std::vector<std::unique_ptr<NodeProgram>>& programs) {
    long horizon = recorded.rounds;
    Trace again = run(g, programs, horizon);
    ReplayResult res;
    for (long t = 0; t < horizon; ++t) {
        const auto& a = recorded.per_round[static_cast<std::size_t>(t)];
        const auto& b = again.per_round[static_cast<std::size_t>(t)];
        if (a == b) continue;
        res.ok = false;
        res.round = t;
        res.node = -1;
        for (std::size_t i = 0; i < std::max(a.tx.size(), b.tx.size()); ++i) {
            if (i >= a.tx.size() || i >= b.tx.size() || !(a.tx[i] == b.tx[i])) {
                res.node = i < b.tx.size() ? b.tx[i].node : a.tx[i].node;
                return res;
            }
        }
        for (std::size_t i = 0; i < std::max(a.rx.size(), b.rx.size()); ++i) {
            if (i >= a.rx.size() || i >= b.rx.size() || !(a.rx[i] == b.rx[i])) {
                res.node = i < b.rx.size() ? b.rx[i].node : a.rx[i].node;
                return res;
            }
        }
        return res;
    }
    return res;
}

std::string serialize_trace(const Trace& t) {
    std::ostringstream os;
    os << "{\"rounds\":" << t.rounds << "}\n";
    for (long r = 0; r < t.rounds; ++r) {
        const auto& rec = t.per_round[static_cast<std::size_t>(r)];
        if (rec.tx.empty() && rec.rx.empty()) continue;
        os << "{\"round\":" << r << ",\"step\":\"" << t.step_name(r) << "\",\"tx\":[";
        for (std::size_t i = 0; i < rec.tx.size(); ++i) {
            const auto& x = rec.tx[i];
            if (i) os << ',';
            os << '[' << x.node << ",\"" << kind_name(x.kind) << "\"," << x.sender_lev << ",\"" << std::hex
               << x.digest << std::dec << "\"]";
        }
        os << "],\"rx\":[";
        for (std::size_t i = 0; i < rec.rx.size(); ++i) {
            const auto& x = rec.rx[i];
            if (i) os << ',';
            os << '[' << x.node << ",\"" << kind_name(x.kind) << "\"," << x.sender_lev << ",\"" << std::hex
               << x.digest << std::dec << "\"]";
        }
        os << "]}\n";
    }
    return os.str();
}

namespace {

Payload::Kind kind_from_name(const std::string& s) {
    if (s == "broadcast") return Payload::Kind::broadcast;
    if (s == "feedback") return Payload::Kind::feedback;
    if (s == "stop") return Payload::Kind::stop;
    if (s == "t1") return Payload::Kind::t1;
    if (s == "gather") return Payload::Kind::gather;
    throw parse_error("trace: unknown payload kind '" + s + "'");
}

// Tiny scanner for the fixed trace line shape written above.
struct LineScan {
    const std::string& s;
    std::size_t i = 0;
    explicit LineScan(const std::string& str) : s(str) {}
    void expect(const std::string& lit) {
        if (s.compare(i, lit.size(), lit) != 0) throw parse_error("trace: expected '" + lit + "'");
        i += lit.size();
    }
    bool peek(char c) const { return i < s.size() && s[i] == c; }
    long number() {
        std::size_t j = i;
        if (j < s.size() && s[j] == '-') ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        long out = 0;
        auto [p, ec] = std::from_chars(s.data() + i, s.data() + j, out);
        if (ec != std::errc() || p != s.data() + j || j == i) throw parse_error("trace: bad number");
        i = j;
        return out;
    }
    std::string quoted() {
        expect("\"");
        std::size_t j = s.find('"', i);
        if (j == std::string::npos) throw parse_error("trace: unterminated string");
        std::string out = s.substr(i, j - i);
        i = j + 1;
        return out;
    }
};

template <typename Rec>
void parse_entries(LineScan& sc, std::vector<Rec>& out) {
    sc.expect("[");
    while (!sc.peek(']')) {
        sc.expect("[");
        Rec rec;
        rec.node = static_cast<Node>(sc.number());
        sc.expect(",");
        rec.kind = kind_from_name(sc.quoted());
        sc.expect(",");
        rec.sender_lev = static_cast<int>(sc.number());
        sc.expect(",");
        std::string hex = sc.quoted();
        if (hex.empty() || hex.size() > 16 ||
            hex.find_first_not_of("0123456789abcdef") != std::string::npos)
            throw parse_error("trace: bad digest '" + hex + "'");
        rec.digest = std::stoull(hex, nullptr, 16);
        sc.expect("]");
        if (sc.peek(',')) sc.expect(",");
        out.push_back(rec);
    }
    sc.expect("]");
}

}  // namespace

Trace parse_trace(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Trace t;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!have_header) {
            LineScan sc(line);
            sc.expect("{\"rounds\":");
            t.rounds = sc.number();
            t.per_round.resize(static_cast<std::size_t>(t.rounds));
            have_header = true;
            continue;
        }
        LineScan sc(line);
        sc.expect("{\"round\":");
        long r = sc.number();
        if (r < 0 || r >= t.rounds) throw parse_error("trace: round out of range");
        sc.expect(",\"step\":");
        (void)sc.quoted();
        sc.expect(",\"tx\":");
        auto& rec = t.per_round[static_cast<std::size_t>(r)];
        parse_entries(sc, rec.tx);
        sc.expect(",\"rx\":");
        parse_entries(sc, rec.rx);
    }
    if (!have_header) throw parse_error("trace: missing header line");
    return t;
}

std::vector<long> informed_times(const Trace& t, const Graph& g, Node source, const AcceptRule& accept) {
    std::vector<long> when(g.node_count(), -1);
    when[source] = 0;
    for (long r = 0; r < t.rounds; ++r) {
        for (const auto& rx : t.per_round[static_cast<std::size_t>(r)].rx) {
            if (when[rx.node] >= 0) continue;
            if (accept(rx.node, rx)) when[rx.node] = r;
        }
    }
    return when;
}

AcceptRule levelled_accept(const std::vector<int>& level, Payload::Kind kind) {
    return [&level, kind](Node receiver, const TraceRx& rx) {
        if (rx.kind != kind) return false;
        return level[receiver] >= 1 && rx.sender_lev == (level[receiver] - 1) % 3;
    };
}

}  // namespace radionet
