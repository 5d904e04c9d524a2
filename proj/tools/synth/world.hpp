#pragma once

#include "prent/backends.hpp"
#include "prent/corpus.hpp"
#include "prent/random.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace synth {

/// What actually happened in a simulated event; descriptions are noisy
/// renderings of it and the simulated models judge prompts against it.
struct latent_event {
  std::string id;
  std::string type;
  int fatalities = 0;
  bool death_mentioned = false;
  std::set<std::string> involves;   ///< tokens a careful reader would accept for "This event involves [Z]."
  std::set<std::string> people;     ///< ... and for "People were [Z]."
  std::set<std::string> plausible;  ///< type-typical tokens that need not hold
  std::string actor;
  std::string target;
  std::string description;
  prent::calendar_date date;
  std::string country;
  std::string region;
};

class world {
public:
  explicit world(std::uint64_t seed);

  latent_event sample(const std::string& id);

  std::vector<std::string> type_names() const;

private:
  prent::random::engine rng_;
};

/// Register texts so that the simulated models can recover the latent event
/// and the template family from prompts.
class oracle {
public:
  void add_event(const latent_event& e, const std::string& cleaned_description);
  /// alias a perturbed description to its source event
  void alias(const std::string& description, const std::string& source_description);
  void add_template(const std::string& family, const std::string& text);

  const latent_event* event_of(std::string_view description) const;
  /// (family, template text) whose rendering ends the prompt
  std::optional<std::pair<std::string, std::string>> split_prompt(std::string_view prompt,
                                                                  std::string& description) const;
  /// (family, token) of a filled hypothesis
  std::optional<std::pair<std::string, std::string>> parse_hypothesis(std::string_view hypothesis) const;

  const std::vector<std::string>& universe(const std::string& family) const;
  const std::string& canonical(std::string_view description) const;

private:
  std::map<std::string, std::shared_ptr<latent_event>, std::less<>> events_;
  std::map<std::string, std::string, std::less<>> source_;
  std::vector<std::pair<std::string, std::string>> templates_;
};

prent::backends simulated_backends(std::shared_ptr<const oracle> o);

} // namespace synth
