/**
 * Form state for one rating task.
 *
 * Submission stays disabled until the audio has been played at least
 * once and all four ratings plus the typed answer key are present.
 * Replays are unlimited and never counted into the submitted body.
 */

import { JudgmentBody, RatingDimension, RATING_RANGES, Task } from "./schema.js";

export interface FormState {
  ratings: Record<RatingDimension, number | null>;
  typedKey: string;
  audioPlayed: boolean;
  submitting: boolean;
}

export function emptyForm(): FormState {
  return {
    ratings: {
      informativeness: null,
      elocution: null,
      interruption: null,
      length_rating: null,
    },
    typedKey: "",
    audioPlayed: false,
    submitting: false,
  };
}

export function setRating(
  form: FormState,
  dimension: RatingDimension,
  value: number,
): FormState {
  const [lo, hi] = RATING_RANGES[dimension];
  if (!Number.isInteger(value) || value < lo || value > hi) {
    throw new Error(`${dimension} value ${value} outside ${lo}..${hi}`);
  }
  return { ...form, ratings: { ...form.ratings, [dimension]: value } };
}

export function setTypedKey(form: FormState, text: string): FormState {
  return { ...form, typedKey: text };
}

export function markAudioPlayed(form: FormState): FormState {
  return { ...form, audioPlayed: true };
}

export function canSubmit(form: FormState): boolean {
  if (!form.audioPlayed || form.submitting) return false;
  if (form.typedKey.trim().length === 0) return false;
  return Object.values(form.ratings).every((v) => v !== null);
}

export function buildJudgmentBody(
  workerId: string,
  task: Task,
  form: FormState,
): JudgmentBody {
  if (!canSubmit(form)) {
    throw new Error("form is incomplete");
  }
  return {
    worker_id: workerId,
    item_id: task.item_id,
    kind: task.kind,
    informativeness: form.ratings.informativeness as number,
    elocution: form.ratings.elocution as number,
    interruption: form.ratings.interruption as number,
    length_rating: form.ratings.length_rating as number,
    typed_key: form.typedKey.trim(),
  };
}
