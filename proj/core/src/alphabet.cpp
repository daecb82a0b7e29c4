#include "drip/automata.hpp"

#include <algorithm>

namespace drip {

Symbol Alphabet::add(SymbolInfo info) {
    if (auto it = ids_.find(info.name); it != ids_.end()) return it->second;
    const auto id = static_cast<Symbol>(symbols_.size());
    ids_.emplace(info.name, id);
    auto pos = std::lower_bound(sorted_.begin(), sorted_.end(), info.name,
                                [&](Symbol s, const std::string& n) { return symbols_[s].name < n; });
    symbols_.push_back(std::move(info));
    sorted_.insert(pos, id);
    rank_.resize(symbols_.size());
    for (std::size_t i = 0; i < sorted_.size(); ++i) rank_[sorted_[i]] = i;
    return id;
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

Symbol Alphabet::at(std::string_view name) const {
    auto s = find(name);
    if (!s) throw AlphabetMismatch("symbol '" + std::string(name) + "' is not in the alphabet");
    return *s;
}

std::set<std::string> Alphabet::names() const {
    std::set<std::string> out;
    for (const auto& s : symbols_) out.insert(s.name);
    return out;
}

std::vector<Symbol> Alphabet::encode(const std::vector<std::string>& word) const {
    std::vector<Symbol> out;
    out.reserve(word.size());
    for (const auto& w : word) out.push_back(at(w));
    return out;
}

Alphabet resource_alphabet(const ResourceSpec& spec) {
    Alphabet a;
    a.add({"s", SymbolKind::Start, {}, {}});
    a.add({"f", SymbolKind::Finish, {}, {}});
    for (const auto& op : spec.acquire_ops()) a.add({op, SymbolKind::Acquire, op, {}});
    for (const auto& op : spec.release_ops()) a.add({op, SymbolKind::Release, op, {}});
    return a;
}

} // namespace drip
