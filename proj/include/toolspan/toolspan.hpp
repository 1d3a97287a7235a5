#pragma once

#include "toolspan/core/entry.hpp"
#include "toolspan/core/errors.hpp"
#include "toolspan/core/jsonl.hpp"
#include "toolspan/core/parallel.hpp"
#include "toolspan/core/rng.hpp"
#include "toolspan/core/segment.hpp"
#include "toolspan/core/text.hpp"
#include "toolspan/core/tokens.hpp"

#include "toolspan/pool/adapters.hpp"
#include "toolspan/pool/manifest.hpp"
#include "toolspan/pool/selection.hpp"

#include "toolspan/annotate/annotate.hpp"
#include "toolspan/annotate/chat.hpp"
#include "toolspan/annotate/journal.hpp"
#include "toolspan/annotate/prompts.hpp"
#include "toolspan/annotate/validate.hpp"

#include "toolspan/filter/executor.hpp"
#include "toolspan/filter/filters.hpp"
#include "toolspan/filter/stats.hpp"
#include "toolspan/filter/subprocess.hpp"
#include "toolspan/filter/trivial.hpp"

#include "toolspan/runtime/session.hpp"
#include "toolspan/runtime/token_source.hpp"

#include "toolspan/bench/evaluate.hpp"
#include "toolspan/bench/fact.hpp"
#include "toolspan/bench/generator.hpp"
#include "toolspan/bench/gold.hpp"
#include "toolspan/bench/match.hpp"
#include "toolspan/bench/pyrepr.hpp"
#include "toolspan/bench/templates.hpp"

#include "toolspan/pipeline.hpp"
