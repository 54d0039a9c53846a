#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reclearn/ast.hpp"
#include "reclearn/errors.hpp"

namespace reclearn {

namespace detail {

inline constexpr Symbol kUnbound = 0xFFFFFFFFu;

// Ground facts of one (predicate, arity), stored as flat symbol rows with an
// open-addressed membership index and a first-argument bucket index.  The
// join loop runs on these rows directly.
class PredTable {
public:
    explicit PredTable(std::uint32_t arity) : arity_(arity) { slots_.resize(16, 0); }

    std::uint32_t arity() const { return arity_; }
    std::uint32_t size() const { return count_; }
    const Symbol* row(std::uint32_t index) const { return pool_.data() + std::size_t(index) * arity_; }

    bool contains(const Symbol* args) const {
        if (arity_ == 0) return count_ > 0;
        std::size_t mask = slots_.size() - 1;
        std::size_t pos = hash_args(args) & mask;
        while (true) {
            std::uint32_t entry = slots_[pos];
            if (entry == 0) return false;
            if (match(entry - 1, args)) return true;
            pos = (pos + 1) & mask;
        }
    }

    bool insert(const Symbol* args) {
        if (arity_ == 0) {
            if (count_ > 0) return false;
            ++count_;
            return true;
        }
        if ((count_ + 1) * 10 >= slots_.size() * 7) grow();
        std::size_t mask = slots_.size() - 1;
        std::size_t pos = hash_args(args) & mask;
        while (true) {
            std::uint32_t entry = slots_[pos];
            if (entry == 0) break;
            if (match(entry - 1, args)) return false;
            pos = (pos + 1) & mask;
        }
        std::uint32_t index = count_++;
        pool_.insert(pool_.end(), args, args + arity_);
        slots_[pos] = index + 1;
        by_first_[args[0]].push_back(index);
        return true;
    }

    const std::vector<std::uint32_t>* rows_with_first(Symbol first) const {
        auto it = by_first_.find(first);
        return it == by_first_.end() ? nullptr : &it->second;
    }

private:
    bool match(std::uint32_t index, const Symbol* args) const {
        const Symbol* stored = row(index);
        for (std::uint32_t i = 0; i < arity_; ++i)
            if (stored[i] != args[i]) return false;
        return true;
    }

    std::uint64_t hash_args(const Symbol* args) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint32_t i = 0; i < arity_; ++i) {
            h ^= args[i];
            h *= 1099511628211ull;
        }
        return h ^ (h >> 31);
    }

    void grow() {
        std::vector<std::uint32_t> fresh(slots_.size() * 2, 0);
        std::size_t mask = fresh.size() - 1;
        for (std::uint32_t index = 0; index < count_; ++index) {
            std::size_t pos = hash_args(row(index)) & mask;
            while (fresh[pos] != 0) pos = (pos + 1) & mask;
            fresh[pos] = index + 1;
        }
        slots_ = std::move(fresh);
    }

    std::uint32_t arity_;
    std::uint32_t count_ = 0;
    std::vector<Symbol> pool_;
    std::vector<std::uint32_t> slots_;
    std::unordered_map<Symbol, std::vector<std::uint32_t>> by_first_;
};

class FactStore {
public:
    bool insert(const Atom& fact) {
        scratch_.clear();
        for (const Term& t : fact.args) scratch_.push_back(t.name());
        return table_for(pred_key(fact), static_cast<std::uint32_t>(fact.arity()))
            .insert(scratch_.data());
    }

    bool contains(const Atom& fact) const {
        const PredTable* t = table(pred_key(fact));
        if (t == nullptr) return false;
        scratch_.clear();
        for (const Term& term : fact.args) scratch_.push_back(term.name());
        return t->contains(scratch_.data());
    }

    const PredTable* table(std::uint64_t key) const {
        auto it = tables_.find(key);
        return it == tables_.end() ? nullptr : it->second.get();
    }

    PredTable& table_for(std::uint64_t key, std::uint32_t arity) {
        auto it = tables_.find(key);
        if (it == tables_.end())
            it = tables_.emplace(key, std::make_unique<PredTable>(arity)).first;
        return *it->second;
    }

private:
    std::unordered_map<std::uint64_t, std::unique_ptr<PredTable>> tables_;
    mutable std::vector<Symbol> scratch_;
};

// Clause pre-resolved into constant values and variable slots so the join
// works on flat arrays; each literal lazily caches its predicate table.
struct CompiledArg {
    bool is_const = false;
    Symbol value = 0;  // constant symbol, or slot index for variables
};

struct CompiledAtom {
    Symbol pred = 0;
    std::uint64_t key = 0;
    std::vector<CompiledArg> args;
    mutable const PredTable* cached_table = nullptr;
};

struct CompiledClause {
    CompiledAtom head;
    std::vector<CompiledAtom> body;
    int slot_count = 0;
    int head_unbound_slots = 0;            // head slots never bound by the body
    std::vector<bool> slot_in_head;
    std::vector<std::uint64_t> body_keys;  // distinct predicate keys, for delta filtering
};

inline CompiledClause compile_clause(const Clause& clause) {
    CompiledClause out;
    std::unordered_map<Symbol, Symbol> slots;
    auto compile_atom = [&](const Atom& atom) {
        CompiledAtom ca;
        ca.pred = atom.predicate;
        ca.key = pred_key(atom);
        ca.args.reserve(atom.args.size());
        for (const Term& t : atom.args) {
            if (t.is_constant()) {
                ca.args.push_back({true, t.name()});
            } else {
                auto [it, inserted] = slots.emplace(t.name(), slots.size());
                (void)inserted;
                ca.args.push_back({false, it->second});
            }
        }
        return ca;
    };
    out.head = compile_atom(clause.head);
    out.body.reserve(clause.body.size());
    std::set<std::uint64_t> keys;
    for (const Atom& lit : clause.body) {
        out.body.push_back(compile_atom(lit));
        keys.insert(out.body.back().key);
    }
    out.body_keys.assign(keys.begin(), keys.end());
    out.slot_count = static_cast<int>(slots.size());
    out.slot_in_head.assign(out.slot_count, false);
    for (const CompiledArg& a : out.head.args)
        if (!a.is_const) out.slot_in_head[a.value] = true;
    return out;
}

inline Symbol equal_predicate() {
    static const Symbol sym = intern("equal");
    return sym;
}

// Backtracking join over one clause body in literal order.  Bindings live in
// a flat slot array; emit receives them with every body literal satisfied.
// When the head becomes ground mid-join and is already a known fact, the
// subtree is pruned: it can only re-derive.
class ClauseJoin {
public:
    ClauseJoin(const FactStore& store, const CompiledClause& clause)
        : store_(store), clause_(clause), bindings_(clause.slot_count, kUnbound) {
        head_open_ = 0;
        for (std::size_t i = 0; i < clause.slot_in_head.size(); ++i)
            if (clause.slot_in_head[i]) ++head_open_;
        // Re-derivations of seeded equality facts must reach the emitter.
        prune_enabled_ = clause.head.pred != equal_predicate();
    }

    // Emit: bool(const std::vector<Symbol>& bindings); return false to abort.
    template <class Emit>
    bool run(Emit&& emit) {
        return descend(0, false, emit);
    }

private:
    const PredTable* resolve(const CompiledAtom& lit) const {
        if (lit.cached_table == nullptr) lit.cached_table = store_.table(lit.key);
        return lit.cached_table;
    }

    // Called once every head slot is bound; true = the head is already a
    // known fact, so the subtree can only re-derive it.
    bool head_already_known() {
        probe_.clear();
        for (const CompiledArg& a : clause_.head.args)
            probe_.push_back(a.is_const ? a.value : bindings_[a.value]);
        const PredTable* t = store_.table(clause_.head.key);
        return t != nullptr && t->contains(probe_.data());
    }

    template <class Emit>
    bool descend(std::size_t index, bool head_checked, Emit& emit) {
        if (prune_enabled_ && head_open_ == 0 && !head_checked) {
            if (head_already_known()) return true;
            head_checked = true;
        }
        if (index == clause_.body.size()) return emit(bindings_);
        const CompiledAtom& lit = clause_.body[index];
        const PredTable* table = resolve(lit);
        if (table == nullptr) return true;  // no facts for this predicate

        bool all_bound = true;
        for (const CompiledArg& a : lit.args) {
            if (!a.is_const && bindings_[a.value] == kUnbound) {
                all_bound = false;
                break;
            }
        }
        if (all_bound) {
            probe_.clear();
            for (const CompiledArg& a : lit.args)
                probe_.push_back(a.is_const ? a.value : bindings_[a.value]);
            if (!table->contains(probe_.data())) return true;
            return descend(index + 1, head_checked, emit);
        }

        const std::vector<std::uint32_t>* rows = nullptr;
        if (lit.args[0].is_const || bindings_[lit.args[0].value] != kUnbound) {
            Symbol first = lit.args[0].is_const ? lit.args[0].value : bindings_[lit.args[0].value];
            rows = table->rows_with_first(first);
            if (rows == nullptr) return true;
            return scan(*rows, table, lit, index, head_checked, emit);
        }
        return scan_all(table, lit, index, head_checked, emit);
    }

    template <class Emit>
    bool scan(const std::vector<std::uint32_t>& rows, const PredTable* table,
              const CompiledAtom& lit, std::size_t index, bool head_checked, Emit& emit) {
        for (std::uint32_t r : rows)
            if (!try_row(table->row(r), lit, index, head_checked, emit)) return false;
        return true;
    }

    template <class Emit>
    bool scan_all(const PredTable* table, const CompiledAtom& lit, std::size_t index,
                  bool head_checked, Emit& emit) {
        for (std::uint32_t r = 0; r < table->size(); ++r)
            if (!try_row(table->row(r), lit, index, head_checked, emit)) return false;
        return true;
    }

    template <class Emit>
    bool try_row(const Symbol* row, const CompiledAtom& lit, std::size_t index, bool head_checked,
                 Emit& emit) {
        std::size_t trail_mark = trail_.size();
        bool ok = true;
        for (std::size_t i = 0; i < lit.args.size(); ++i) {
            const CompiledArg& a = lit.args[i];
            if (a.is_const) {
                if (a.value != row[i]) {
                    ok = false;
                    break;
                }
            } else if (bindings_[a.value] == kUnbound) {
                bindings_[a.value] = row[i];
                trail_.push_back(a.value);
                if (clause_.slot_in_head[a.value]) --head_open_;
            } else if (bindings_[a.value] != row[i]) {
                ok = false;
                break;
            }
        }
        if (ok && !descend(index + 1, head_checked, emit)) {
            unwind(trail_mark);
            return false;
        }
        unwind(trail_mark);
        return true;
    }

    void unwind(std::size_t mark) {
        while (trail_.size() > mark) {
            Symbol slot = trail_.back();
            trail_.pop_back();
            bindings_[slot] = kUnbound;
            if (clause_.slot_in_head[slot]) ++head_open_;
        }
    }

    const FactStore& store_;
    const CompiledClause& clause_;
    std::vector<Symbol> bindings_;
    std::vector<Symbol> trail_;
    std::vector<Symbol> probe_;
    int head_open_ = 0;
    bool prune_enabled_ = true;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Bottom-up evaluation
// ---------------------------------------------------------------------------

// Layered bottom-up closure of a program over db ∪ description.  Layer 0
// holds the given facts; layer t the heads derivable with every subgoal in
// layers below t.  The first layer containing an atom is therefore its
// minimum proof depth, and the union of all layers the least model.
//
// Every evaluation implicitly supplies equal(c, c) for each constant in
// scope; these built-ins are excluded from reported models unless they were
// given or re-derived.
class BottomUpEngine {
public:
    BottomUpEngine(const Program& program, const Database& db, std::span<const Atom> description) {
        std::set<Symbol> constants;
        for (const Atom& f : db.facts()) {
            collect_constants(f, constants);
            if (store_.insert(f)) base_.push_back(f);
        }
        for (const Atom& f : description) {
            if (!f.ground()) throw InputError("description atoms must be ground");
            collect_constants(f, constants);
            if (store_.insert(f)) base_.push_back(f);
        }
        for (const Clause& c : program.clauses) {
            collect_constants(c.head, constants);
            for (const Atom& lit : c.body) collect_constants(lit, constants);
        }
        universe_.assign(constants.begin(), constants.end());
        for (Symbol c : constants) {
            Atom eq(detail::equal_predicate(),
                    {Term(Term::Kind::Constant, c), Term(Term::Kind::Constant, c)});
            if (store_.insert(eq)) seeded_equals_.insert(std::move(eq));
        }
        for (const Clause& c : program.clauses) compiled_.push_back(detail::compile_clause(c));
    }

    struct RunResult {
        bool query_found = false;
        int query_layer = -1;  // 0 when the query is already a given fact
        int layers_run = 0;
    };

    RunResult run(int max_layers = std::numeric_limits<int>::max(), const Atom* query = nullptr) {
        RunResult result;
        if (query != nullptr && store_.contains(*query)) {
            result.query_found = true;
            result.query_layer = 0;
            return result;
        }
        std::vector<Atom> staged;
        std::unordered_set<Atom, AtomHash> staged_set;
        std::set<std::uint64_t> changed;
        bool first_round = true;
        for (int round = 1; round <= max_layers; ++round) {
            staged.clear();
            staged_set.clear();
            std::set<std::uint64_t> next_changed;
            for (const detail::CompiledClause& clause : compiled_) {
                if (!first_round && !touches(clause, changed)) continue;
                detail::ClauseJoin join(store_, clause);
                join.run([&](const std::vector<Symbol>& bindings) {
                    emit_head(clause, bindings, staged, staged_set, next_changed);
                    return true;
                });
            }
            first_round = false;
            if (staged.empty()) break;
            for (Atom& fact : staged) {
                store_.insert(fact);
                derived_.push_back(fact);
            }
            result.layers_run = round;
            changed = std::move(next_changed);
            if (query != nullptr && store_.contains(*query)) {
                result.query_found = true;
                result.query_layer = round;
                return result;
            }
        }
        return result;
    }

    bool contains(const Atom& fact) const { return store_.contains(fact); }

    // db ∪ description ∪ derived atoms; implicit equality facts appear only
    // if they were given or derived by a clause.
    std::vector<Atom> model() const {
        std::vector<Atom> out = base_;
        out.insert(out.end(), derived_.begin(), derived_.end());
        return out;
    }

    const std::vector<Symbol>& universe() const { return universe_; }

private:
    static bool touches(const detail::CompiledClause& clause, const std::set<std::uint64_t>& keys) {
        for (std::uint64_t k : clause.body_keys)
            if (keys.count(k)) return true;
        return false;
    }

    void emit_head(const detail::CompiledClause& clause, const std::vector<Symbol>& bindings,
                   std::vector<Atom>& staged, std::unordered_set<Atom, AtomHash>& staged_set,
                   std::set<std::uint64_t>& next_changed) {
        Atom head;
        head.predicate = clause.head.pred;
        head.args.reserve(clause.head.args.size());
        std::vector<std::vector<int>> open_groups;  // positions sharing one unbound slot
        std::vector<Symbol> open_slots;
        for (std::size_t i = 0; i < clause.head.args.size(); ++i) {
            const detail::CompiledArg& a = clause.head.args[i];
            if (a.is_const) {
                head.args.push_back(Term(Term::Kind::Constant, a.value));
            } else if (bindings[a.value] != detail::kUnbound) {
                head.args.push_back(Term(Term::Kind::Constant, bindings[a.value]));
            } else {
                head.args.push_back(Term(Term::Kind::Constant, 0));
                auto it = std::find(open_slots.begin(), open_slots.end(), a.value);
                if (it == open_slots.end()) {
                    open_slots.push_back(a.value);
                    open_groups.push_back({static_cast<int>(i)});
                } else {
                    open_groups[it - open_slots.begin()].push_back(static_cast<int>(i));
                }
            }
        }
        enumerate_groups(head, open_groups, 0, staged, staged_set, next_changed);
    }

    // Head variables not bound by the body range over every constant in
    // scope; positions sharing a variable move together.
    void enumerate_groups(Atom& head, const std::vector<std::vector<int>>& groups, std::size_t g,
                          std::vector<Atom>& staged, std::unordered_set<Atom, AtomHash>& staged_set,
                          std::set<std::uint64_t>& next_changed) {
        if (g == groups.size()) {
            if (store_.contains(head)) {
                auto it = seeded_equals_.find(head);
                if (it != seeded_equals_.end()) {
                    derived_.push_back(head);  // a built-in equality re-derived by a clause
                    seeded_equals_.erase(it);
                }
                return;
            }
            if (staged_set.insert(head).second) {
                staged.push_back(head);
                next_changed.insert(pred_key(head));
            }
            return;
        }
        for (Symbol c : universe_) {
            for (int pos : groups[g]) head.args[pos] = Term(Term::Kind::Constant, c);
            enumerate_groups(head, groups, g + 1, staged, staged_set, next_changed);
        }
    }

    detail::FactStore store_;
    std::vector<detail::CompiledClause> compiled_;
    std::vector<Atom> base_;
    std::vector<Atom> derived_;
    std::vector<Symbol> universe_;
    std::unordered_set<Atom, AtomHash> seeded_equals_;
};

// Least model of program ∧ db ∧ description, textually sorted.
inline std::vector<Atom> fixpoint(const Program& program, const Database& db,
                                  std::span<const Atom> description) {
    BottomUpEngine engine(program, db, description);
    engine.run();
    std::vector<Atom> model = engine.model();
    std::sort(model.begin(), model.end(), [](const Atom& a, const Atom& b) {
        if (a.predicate != b.predicate)
            return symbol_name(a.predicate) < symbol_name(b.predicate);
        if (a.arity() != b.arity()) return a.arity() < b.arity();
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (a.args[i] != b.args[i]) return a.args[i].text() < b.args[i].text();
        return false;
    });
    return model;
}

// DB ∧ D ∧ P ⊢ f, decided bottom-up; total on well-formed inputs.
inline bool covers(const Program& program, const Database& db, const ExtendedInstance& inst) {
    BottomUpEngine engine(program, db, inst.description);
    return engine.run(std::numeric_limits<int>::max(), &inst.fact).query_found;
}

// Minimum recursion depth over all proofs of the instance fact: given facts
// close a branch at depth 0, and each clause application adds one to the
// deepest subproof.  Deepening proceeds one resolution layer at a time with
// every goal proven so far memoized in the layer store, so each depth bound
// reuses the work of the previous one.  Absent when no proof of depth at
// most max_depth exists.
inline std::optional<int> prove_min_depth(const Program& program, const Database& db,
                                          const ExtendedInstance& inst, int max_depth) {
    if (max_depth < 0) throw InputError("max_depth must be nonnegative");
    BottomUpEngine engine(program, db, inst.description);
    BottomUpEngine::RunResult result = engine.run(max_depth, &inst.fact);
    if (!result.query_found) return std::nullopt;
    return result.query_layer;
}

// ---------------------------------------------------------------------------
// Ordered (Prolog-style) determinate evaluation
// ---------------------------------------------------------------------------

enum class OrderedOutcome { Covered, NotCovered };

// Evaluates a clause body in literal order against a fixed fact set, with
// the head unified against a ground goal.  Each literal must admit at most
// one extension substitution; a second extension raises
// DeterminacyViolation.  This is the semantic determinacy check, and the
// evaluation substrate for propositionalization.
class OrderedEvaluator {
public:
    OrderedEvaluator(const Database& db, std::span<const Atom> description) {
        std::set<Symbol> constants;
        for (const Atom& f : db.facts()) {
            collect_constants(f, constants);
            store_.insert(f);
        }
        for (const Atom& f : description) {
            if (!f.ground()) throw InputError("description atoms must be ground");
            collect_constants(f, constants);
            store_.insert(f);
        }
        for (Symbol c : constants)
            store_.insert(Atom(detail::equal_predicate(),
                               {Term(Term::Kind::Constant, c), Term(Term::Kind::Constant, c)}));
    }

    OrderedOutcome evaluate(const Clause& clause, const Atom& goal) const {
        detail::CompiledClause compiled = detail::compile_clause(clause);
        std::vector<Symbol> bindings(compiled.slot_count, detail::kUnbound);
        if (compiled.head.pred != goal.predicate || compiled.head.args.size() != goal.args.size())
            throw InputError("goal does not unify with the clause head");
        for (std::size_t i = 0; i < goal.args.size(); ++i) {
            const detail::CompiledArg& a = compiled.head.args[i];
            Symbol value = goal.args[i].name();
            if (a.is_const) {
                if (a.value != value) throw InputError("goal does not unify with the clause head");
            } else if (bindings[a.value] == detail::kUnbound) {
                bindings[a.value] = value;
            } else if (bindings[a.value] != value) {
                throw InputError("goal does not unify with the clause head");
            }
        }
        for (std::size_t index = 0; index < compiled.body.size(); ++index) {
            if (!extend(compiled.body[index], bindings, static_cast<int>(index)))
                return OrderedOutcome::NotCovered;
        }
        return OrderedOutcome::Covered;
    }

private:
    // Binds the literal's output variables from the unique matching fact;
    // false when no fact matches.
    bool extend(const detail::CompiledAtom& lit, std::vector<Symbol>& bindings,
                int literal_index) const {
        const detail::PredTable* table = store_.table(lit.key);
        std::vector<Symbol> open_slots;  // distinct unbound slots, in first-occurrence order
        for (const detail::CompiledArg& a : lit.args) {
            if (a.is_const || bindings[a.value] != detail::kUnbound) continue;
            if (std::find(open_slots.begin(), open_slots.end(), a.value) == open_slots.end())
                open_slots.push_back(a.value);
        }

        if (open_slots.empty()) {
            if (table == nullptr) return false;
            std::vector<Symbol> probe;
            probe.reserve(lit.args.size());
            for (const detail::CompiledArg& a : lit.args)
                probe.push_back(a.is_const ? a.value : bindings[a.value]);
            return table->contains(probe.data());
        }
        if (table == nullptr) return false;

        auto slot_position = [&](Symbol slot) {
            return std::find(open_slots.begin(), open_slots.end(), slot) - open_slots.begin();
        };
        bool found = false;
        std::vector<Symbol> extension(open_slots.size());
        std::vector<Symbol> local(open_slots.size());
        for (std::uint32_t r = 0; r < table->size(); ++r) {
            const Symbol* row = table->row(r);
            std::fill(local.begin(), local.end(), detail::kUnbound);
            bool ok = true;
            for (std::size_t i = 0; i < lit.args.size() && ok; ++i) {
                const detail::CompiledArg& a = lit.args[i];
                Symbol value = row[i];
                if (a.is_const) {
                    ok = a.value == value;
                } else if (bindings[a.value] != detail::kUnbound) {
                    ok = bindings[a.value] == value;
                } else {
                    std::size_t w = slot_position(a.value);
                    if (local[w] == detail::kUnbound)
                        local[w] = value;
                    else
                        ok = local[w] == value;
                }
            }
            if (!ok) continue;
            if (found && local != extension)
                throw DeterminacyViolation("literal admits more than one extension substitution",
                                           literal_index);
            if (!found) {
                found = true;
                extension = local;
            }
        }
        if (!found) return false;
        for (std::size_t w = 0; w < open_slots.size(); ++w) bindings[open_slots[w]] = extension[w];
        return true;
    }

    detail::FactStore store_;
};

}  // namespace reclearn
