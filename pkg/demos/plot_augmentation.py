"""
Generating annotations with a model, offline
============================================

A canned provider stands in for a model endpoint, so this runs anywhere.
"""

import json

from scate.augmentation import MockProvider, build_prompt, run_augmentation

template = "Annotate the time expressions in the text as a JSON list.\nDate: {{dct}}\nText: {{sentence}}"
sentences = ["Prices rose in recent years.", "See you tomorrow."]

# Responses are looked up by prompt; the second one names a date that does not exist
answers = {
    build_prompt(template, sentences[0]): json.dumps(
        [{"time_text": "recent years", "scate": "Last(Interval.of(1998, 2, 13), Period(YEAR, None))"}]),
    build_prompt(template, sentences[1]): json.dumps(
        [{"time_text": "tomorrow", "scate": "Next(Interval.of(2024, 2, 30), Period(DAY, 1))"}]),
}
records, report = run_augmentation(sentences, template, MockProvider.for_prompts(answers))

# Only expressions that execute survive
for record in records:
    print(record)
print(json.dumps(report.to_json(), indent=2))
