// ============================================================================
// idm/io.hpp — document formats and canonical serialization
// ============================================================================
//
// Line-delimited text formats. Amounts serialize exactly, as "5" or "7/3",
// never as floats. Emission is canonical: nodes sorted by id, debts by
// (debtor, creditor, label), payments by (debtor, creditor, label, time), so
// emit(parse(emit(x))) == emit(x) byte for byte and the content hash of an
// instance is stable. Parsing is strict — unknown directives, bad arity and
// duplicate entries are errors with line numbers — except that blank lines
// and '#' comments are skipped.
//
// instance document          schedule document         bailout document
//   idm-instance v1            idm-schedule v1           idm-bailout v1
//   node <id> <assets>         instance <hash>           supplement <id> <amt>
//   debt <u> <v> <label>       pay <u> <v> <label>
//        <amount> <t1> <t2>        <time> <amount>
//
// Schedules bind to their instance by content hash; validating a schedule
// against a different instance is rejected at parse time.

#pragma once

#include "idm/instance.hpp"
#include "idm/schedule.hpp"

#include <charconv>
#include <sstream>
#include <string>
#include <vector>

namespace idm {

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] int line() const { return line_; }

  private:
    int line_;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// Lines of a document, skipping blanks and comments; (line number, tokens).
inline std::vector<std::pair<int, std::vector<std::string>>> logical_lines(
    const std::string& text) {
    std::vector<std::pair<int, std::vector<std::string>>> out;
    std::istringstream in(text);
    std::string line;
    int num = 0;
    while (std::getline(in, line)) {
        ++num;
        auto toks = tokenize(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        out.emplace_back(num, std::move(toks));
    }
    return out;
}

inline int parse_int(const std::string& tok, int line, const char* what) {
    int value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
    return value;
}

inline Money parse_money(const std::string& tok, int line, const char* what) {
    auto m = Money::parse(tok);
    if (!m) throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
    return *m;
}

} // namespace detail

// --- instances ---------------------------------------------------------------

inline std::string emit_instance(const IdmInstance& inst) {
    std::ostringstream os;
    os << "idm-instance v1\n";
    std::vector<int> order(inst.node_count());
    for (int v = 0; v < inst.node_count(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return inst.node_id(a) < inst.node_id(b); });
    for (int v : order) os << "node " << inst.node_id(v) << " " << inst.initial_asset(v) << "\n";
    std::vector<int> debts(inst.debt_count());
    for (int e = 0; e < inst.debt_count(); ++e) debts[e] = e;
    std::sort(debts.begin(), debts.end(), [&](int a, int b) {
        const Debt& da = inst.debt(a);
        const Debt& db = inst.debt(b);
        return std::make_tuple(inst.node_id(da.debtor), inst.node_id(da.creditor), da.label) <
               std::make_tuple(inst.node_id(db.debtor), inst.node_id(db.creditor), db.label);
    });
    for (int e : debts) {
        const Debt& d = inst.debt(e);
        os << "debt " << inst.node_id(d.debtor) << " " << inst.node_id(d.creditor) << " "
           << d.label << " " << d.terms.amount << " " << d.terms.t1 << " " << d.terms.t2 << "\n";
    }
    return os.str();
}

inline IdmInstance parse_instance(const std::string& text) {
    auto lines = detail::logical_lines(text);
    if (lines.empty() || lines[0].second != std::vector<std::string>{"idm-instance", "v1"})
        throw ParseError(lines.empty() ? 1 : lines[0].first, "expected 'idm-instance v1' header");
    std::vector<NodeId> nodes;
    std::vector<Money> assets;
    std::vector<DebtSpec> debts;
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto& [num, toks] = lines[i];
        if (toks[0] == "node") {
            if (toks.size() != 3) throw ParseError(num, "node takes <id> <assets>");
            nodes.push_back(toks[1]);
            assets.push_back(detail::parse_money(toks[2], num, "asset amount"));
        } else if (toks[0] == "debt") {
            if (toks.size() != 7)
                throw ParseError(num, "debt takes <debtor> <creditor> <label> <amount> <t1> <t2>");
            DebtSpec s;
            s.debtor = toks[1];
            s.creditor = toks[2];
            s.label = detail::parse_int(toks[3], num, "label");
            s.amount = detail::parse_money(toks[4], num, "amount");
            s.t1 = detail::parse_int(toks[5], num, "t1");
            s.t2 = detail::parse_int(toks[6], num, "t2");
            debts.push_back(std::move(s));
        } else {
            throw ParseError(num, "unknown directive '" + toks[0] + "'");
        }
    }
    try {
        return IdmInstance::build(std::move(nodes), debts, std::move(assets));
    } catch (const ModelViolation& e) {
        throw ParseError(0, e.what());
    }
}

// FNV-1a over the canonical emission; stable across declaration order.
inline std::string instance_hash(const IdmInstance& inst) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : emit_instance(inst)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    for (int i = 15; i >= 0; --i) os << ((h >> (4 * i)) & 0xf);
    return os.str();
}

// --- schedules ---------------------------------------------------------------

inline std::string emit_schedule(const IdmInstance& inst, const Schedule& sched) {
    std::ostringstream os;
    os << "idm-schedule v1\n";
    os << "instance " << instance_hash(inst) << "\n";
    using Row = std::tuple<NodeId, NodeId, int, int, Money>;
    std::vector<Row> rows;
    for (const auto& [key, amount] : sched.payments()) {
        const Debt& d = inst.debt(key.first);
        rows.emplace_back(inst.node_id(d.debtor), inst.node_id(d.creditor), d.label, key.second,
                          amount);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [u, v, label, time, amount] : rows)
        os << "pay " << u << " " << v << " " << label << " " << time << " " << amount << "\n";
    return os.str();
}

inline Schedule parse_schedule(const std::string& text, const IdmInstance& inst) {
    auto lines = detail::logical_lines(text);
    if (lines.empty() || lines[0].second != std::vector<std::string>{"idm-schedule", "v1"})
        throw ParseError(lines.empty() ? 1 : lines[0].first, "expected 'idm-schedule v1' header");
    Schedule sched(inst);
    bool hash_seen = false;
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto& [num, toks] = lines[i];
        if (toks[0] == "instance") {
            if (toks.size() != 2) throw ParseError(num, "instance takes <hash>");
            if (hash_seen) throw ParseError(num, "duplicate instance line");
            hash_seen = true;
            if (toks[1] != instance_hash(inst))
                throw ParseError(num, "schedule bound to a different instance (stale hash)");
        } else if (toks[0] == "pay") {
            if (toks.size() != 6)
                throw ParseError(num, "pay takes <debtor> <creditor> <label> <time> <amount>");
            if (!hash_seen) throw ParseError(num, "pay before instance hash");
            int debt = inst.find_debt(toks[1], toks[2],
                                      detail::parse_int(toks[3], num, "label"));
            if (debt < 0) throw ParseError(num, "unknown debt");
            int time = detail::parse_int(toks[4], num, "time");
            Money amount = detail::parse_money(toks[5], num, "amount");
            if (!amount.is_positive()) throw ParseError(num, "payment must be positive");
            if (time < 1 || time > inst.lifetime())
                throw ParseError(num, "time outside [1, lifetime]");
            if (!sched.amount_at(debt, time).is_zero())
                throw ParseError(num, "duplicate payment entry");
            sched.set(debt, time, std::move(amount));
        } else {
            throw ParseError(num, "unknown directive '" + toks[0] + "'");
        }
    }
    if (!hash_seen) throw ParseError(0, "missing instance hash line");
    return sched;
}

// --- bailouts ----------------------------------------------------------------

inline std::string emit_bailout(const IdmInstance& inst, const BailoutVector& bailout) {
    std::ostringstream os;
    os << "idm-bailout v1\n";
    std::vector<int> order(inst.node_count());
    for (int v = 0; v < inst.node_count(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return inst.node_id(a) < inst.node_id(b); });
    for (int v : order)
        if (!bailout.at(v).is_zero())
            os << "supplement " << inst.node_id(v) << " " << bailout.at(v) << "\n";
    return os.str();
}

inline BailoutVector parse_bailout(const std::string& text, const IdmInstance& inst) {
    auto lines = detail::logical_lines(text);
    if (lines.empty() || lines[0].second != std::vector<std::string>{"idm-bailout", "v1"})
        throw ParseError(lines.empty() ? 1 : lines[0].first, "expected 'idm-bailout v1' header");
    BailoutVector b(inst.node_count());
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto& [num, toks] = lines[i];
        if (toks[0] != "supplement") throw ParseError(num, "unknown directive '" + toks[0] + "'");
        if (toks.size() != 3) throw ParseError(num, "supplement takes <id> <amount>");
        if (!inst.has_node(toks[1])) throw ParseError(num, "unknown node '" + toks[1] + "'");
        Money amount = detail::parse_money(toks[2], num, "amount");
        if (amount.is_negative()) throw ParseError(num, "supplement must be non-negative");
        int v = inst.node_index(toks[1]);
        if (!b.at(v).is_zero()) throw ParseError(num, "duplicate supplement entry");
        b.set(v, std::move(amount));
    }
    return b;
}

} // namespace idm
