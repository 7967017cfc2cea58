#include "metaglyph/forge/universe.hpp"

#include <algorithm>

#include "metaglyph/errors.hpp"
#include "metaglyph/util/rng.hpp"

namespace metaglyph::forge {

const std::vector<std::string>& animal_names() {
    static const std::vector<std::string> pool = {
        "cat",  "dog",  "sparrow", "eagle", "salmon", "shark", "horse",
        "rabbit", "lizard", "turtle", "owl",  "bat",   "fox",   "wolf",
        "deer", "otter", "ferret",  "gecko", "crow",  "trout",
    };
    return pool;
}

const std::vector<std::string>& person_names() {
    static const std::vector<std::string> pool = {
        "Alice", "Bob",  "Carol",   "Dave",  "Erin",  "Frank", "Grace",
        "Heidi", "Ivan", "Judy",    "Ken",   "Laura", "Mallory", "Nina",
        "Oscar", "Peggy", "Quinn",  "Rita",  "Steve", "Trudy",
    };
    return pool;
}

ItemUniverse generate_universe(std::uint64_t seed, int size,
                               const std::vector<std::string>& vocab,
                               double category_prob,
                               const std::vector<std::string>& name_pool) {
    if (vocab.size() < 2) throw ConfigError("universe vocab needs at least 2 labels");
    if (size < 1) throw ConfigError("universe size must be at least 1");
    if (category_prob <= 0.0 || category_prob >= 1.0) {
        throw ConfigError("category_prob must lie strictly between 0 and 1");
    }

    const auto& pool = name_pool.empty() ? animal_names() : name_pool;
    util::Rng rng = util::Rng(seed).child("universe");

    std::vector<std::string> names(pool.begin(), pool.end());
    rng.shuffle(names);
    while (static_cast<int>(names.size()) < size) {
        names.push_back(names[names.size() % pool.size()] + "_" +
                        std::to_string(names.size() / pool.size() + 1));
    }
    names.resize(size);

    std::vector<std::string> sorted_vocab = vocab;
    std::sort(sorted_vocab.begin(), sorted_vocab.end());

    ItemUniverse universe;
    universe.seed = seed;
    universe.vocab = sorted_vocab;
    for (int i = 0; i < size; ++i) {
        Item item;
        item.name = names[i];
        for (const auto& category : sorted_vocab) {
            if (rng.next_bool(category_prob)) item.categories.push_back(category);
        }
        if (item.categories.empty()) {
            item.categories.push_back(sorted_vocab[rng.next_below(sorted_vocab.size())]);
        }
        universe.items.push_back(std::move(item));
    }

    // Coverage patch: every vocab category appears somewhere once the
    // universe is large enough to allow it.
    if (size >= static_cast<int>(sorted_vocab.size())) {
        for (const auto& category : sorted_vocab) {
            const bool present = std::any_of(
                universe.items.begin(), universe.items.end(), [&](const Item& item) {
                    return std::binary_search(item.categories.begin(),
                                              item.categories.end(), category);
                });
            if (!present) {
                auto& target = universe.items[rng.next_below(universe.items.size())];
                target.categories.push_back(category);
                std::sort(target.categories.begin(), target.categories.end());
            }
        }
    }
    return universe;
}

} // namespace metaglyph::forge
