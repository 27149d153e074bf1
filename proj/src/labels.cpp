#include "radionet/labels.hpp"

#include <algorithm>
#include <sstream>

#include "radionet/util.hpp"

namespace radionet {

std::string BroadcastLabel::encode() const {
    std::string out;
    out.reserve(width());
    out.push_back(join ? '1' : '0');
    out.push_back((lev >> 1) & 1 ? '1' : '0');
    out.push_back(lev & 1 ? '1' : '0');
    out.push_back(stay ? '1' : '0');
    out.push_back(go ? '1' : '0');
    out.push_back(fast ? '1' : '0');
    out.push_back(rescue ? '1' : '0');
    if (has_ack) {
        out.push_back(on_path ? '1' : '0');
        out.push_back(terminal ? '1' : '0');
    }
    return out;
}

BroadcastLabel BroadcastLabel::decode(const std::string& bits) {
    RN_CHECK(bits.size() == 7 || bits.size() == 9, "label decode: width must be 7 or 9");
    for (char c : bits) RN_CHECK(c == '0' || c == '1', "label decode: not a bitstring");
    BroadcastLabel l;
    l.join = bits[0] == '1';
    l.lev = ((bits[1] == '1') << 1) | (bits[2] == '1');
    l.stay = bits[3] == '1';
    l.go = bits[4] == '1';
    l.fast = bits[5] == '1';
    l.rescue = bits[6] == '1';
    if (bits.size() == 9) {
        l.has_ack = true;
        l.on_path = bits[7] == '1';
        l.terminal = bits[8] == '1';
    }
    return l;
}

namespace {
int field_bits(int max_value) { return std::max(1, ceil_log2(static_cast<long>(max_value) + 1)); }
}  // namespace

int gather_label_width(const GatherLabel& l) {
    // b (2 bits), F/S flag, leaf flag, embedded broadcast label, and three
    // integer fields encoded against the shared bound C: C itself, s in
    // [0,C-1], s'+1 in [0,C].
    int c_bits = field_bits(l.spacing_base);
    return l.bcast.width() + 2 + 1 + 1 + 3 * c_bits;
}

int LabelTable::max_width() const {
    int w = 0;
    for (int v = 0; v < size(); ++v) {
        int wv = bcast[v].width();
        if (has_gather() && gather[v].sink_degree < 0) wv = gather_label_width(gather[v]);
        w = std::max(w, wv);
    }
    return w;
}

std::string LabelTable::save() const {
    std::ostringstream os;
    for (int v = 0; v < size(); ++v) {
        os << v << ' ' << bcast[v].encode();
        if (has_gather()) {
            const auto& gl = gather[v];
            os << ' ' << gl.spacing_base << ' ' << gl.s << ' ' << gl.s_prime << ' ' << gl.b << ' '
               << (gl.fast_flag ? 1 : 0) << ' ' << (gl.leaf_flag ? 1 : 0) << ' ' << gl.sink_degree << ' '
               << gl.diameter_hint << ' ' << gl.logn_hint;
        }
        os << '\n';
    }
    return os.str();
}

LabelTable LabelTable::load(const std::string& text) {
    LabelTable table;
    std::istringstream in(text);
    std::string line;
    int expect = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int node;
        std::string bits;
        RN_CHECK(static_cast<bool>(ls >> node >> bits), "label table: bad line");
        RN_CHECK(node == expect, "label table: nodes must be dense and ordered");
        ++expect;
        table.bcast.push_back(BroadcastLabel::decode(bits));
        GatherLabel gl;
        int fast_flag = 0, leaf_flag = 0;
        if (ls >> gl.spacing_base >> gl.s >> gl.s_prime >> gl.b >> fast_flag >> leaf_flag >>
            gl.sink_degree >> gl.diameter_hint >> gl.logn_hint) {
            gl.fast_flag = fast_flag != 0;
            gl.leaf_flag = leaf_flag != 0;
            gl.bcast = table.bcast.back();
            table.gather.push_back(gl);
        }
    }
    if (!table.gather.empty())
        RN_CHECK(table.gather.size() == table.bcast.size(), "label table: mixed gather rows");
    return table;
}

}  // namespace radionet
