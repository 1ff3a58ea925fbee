/**
 * Wire types for the collection service API.
 *
 * The posted judgment body mirrors the service's judgment type; the
 * trap flag and timestamp are server-authoritative and never sent.
 * Kept dependency-free so the tsc output runs as plain browser ES
 * modules; the zod validation schema lives with the contract tests.
 */

export interface JudgmentBody {
  worker_id: string;
  item_id: string;
  kind: string;
  informativeness: number;
  elocution: number;
  interruption: number;
  length_rating: number;
  typed_key: string;
  is_trap?: boolean;
  timestamp?: string;
}

export interface Task {
  task_id: string;
  item_id: string;
  kind: string;
  question: string;
  audio_asset_id: string;
  audio_url: string;
}

export type RatingDimension =
  | "informativeness"
  | "elocution"
  | "interruption"
  | "length_rating";

export const RATING_RANGES: Record<RatingDimension, [number, number]> = {
  informativeness: [0, 4],
  elocution: [0, 2],
  interruption: [0, 1],
  length_rating: [-1, 1],
};
