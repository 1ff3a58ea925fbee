/**
 * Typed client for the collection service wire API.
 */

import { JudgmentBody, Task } from "./schema.js";

export type TaskResult =
  | { kind: "task"; task: Task }
  | { kind: "done" };

export type SubmitResult =
  | { kind: "accepted"; sequence: number }
  | { kind: "rejected"; problems: string[] }
  | { kind: "duplicate" };

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async fetchTask(workerId: string): Promise<TaskResult> {
    const url = `${this.baseUrl}/api/task?worker_id=${encodeURIComponent(workerId)}`;
    const resp = await this.fetchFn(url);
    if (resp.status === 204) return { kind: "done" };
    if (!resp.ok) throw new ApiError(`task fetch failed (${resp.status})`, resp.status);
    const task = (await resp.json()) as Task;
    return { kind: "task", task };
  }

  async postJudgment(body: JudgmentBody): Promise<SubmitResult> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/judgment`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (resp.ok) {
      const payload = (await resp.json()) as { sequence: number };
      return { kind: "accepted", sequence: payload.sequence };
    }
    if (resp.status === 400 || resp.status === 422) {
      const payload = (await resp.json().catch(() => ({}))) as {
        problems?: string[];
        error?: string;
      };
      return { kind: "rejected", problems: payload.problems ?? [payload.error ?? "rejected"] };
    }
    if (resp.status === 409) return { kind: "duplicate" };
    throw new ApiError(`judgment post failed (${resp.status})`, resp.status);
  }

  audioUrl(task: Task): string {
    return `${this.baseUrl}${task.audio_url}`;
  }
}
