/**
 * Rating-scale label text.
 *
 * The wording ships as editable JSON (labels.json next to the built
 * app) so operators can adjust or localize it without rebuilding;
 * these embedded defaults are the fallback.  The option VALUES are
 * fixed by the wire schema; only the display text is editable.
 */

export interface DimensionLabels {
  title: string;
  options?: Record<string, string>;
}

export type Labels = Record<string, DimensionLabels>;

export const DEFAULT_LABELS: Labels = {
  informativeness: {
    title: "How well does the audio answer the question?",
    options: {
      "0": "0 - does not answer it at all",
      "1": "1 - barely related to the question",
      "2": "2 - partially answers it",
      "3": "3 - mostly answers it",
      "4": "4 - fully answers it",
    },
  },
  elocution: {
    title: "Were the words pronounced correctly?",
    options: {
      "0": "0 - serious pronunciation problems",
      "1": "1 - minor pronunciation problems",
      "2": "2 - everything pronounced correctly",
    },
  },
  interruption: {
    title: "Did you hear unwarranted interruptions?",
    options: { "0": "0 - no", "1": "1 - yes" },
  },
  length_rating: {
    title: "Was the audio length appropriate?",
    options: { "-1": "-1 - too short", "0": "0 - about right", "1": "+1 - too long" },
  },
  typed_key: { title: "Type the short answer you heard" },
};

export async function loadLabels(fetchFn: typeof fetch = fetch): Promise<Labels> {
  try {
    const resp = await fetchFn("./labels.json");
    if (!resp.ok) return DEFAULT_LABELS;
    const loaded = (await resp.json()) as Labels;
    return { ...DEFAULT_LABELS, ...loaded };
  } catch {
    return DEFAULT_LABELS;
  }
}
