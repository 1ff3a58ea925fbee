/**
 * Session flow: fetch a task, collect the form, submit, repeat.
 *
 * One active task per browser session; the server stays the source of
 * truth.  A submit in flight blocks further submits, so a double-click
 * produces a single judgment.
 */

import { ApiClient, ApiError } from "./api.js";
import { RatingDimension, Task } from "./schema.js";
import {
  FormState,
  buildJudgmentBody,
  canSubmit,
  emptyForm,
  markAudioPlayed,
  setRating,
  setTypedKey,
} from "./state.js";

export type View =
  | { screen: "task"; task: Task; form: FormState; errors: string[] }
  | { screen: "done" }
  | { screen: "retry"; message: string };

export class SessionController {
  private task: Task | null = null;
  private form: FormState = emptyForm();
  private errors: string[] = [];

  constructor(
    private readonly api: ApiClient,
    private readonly workerId: string,
    private readonly onChange: (view: View) => void,
  ) {}

  private render(view: View) {
    this.onChange(view);
  }

  private renderTask() {
    if (this.task) {
      this.render({ screen: "task", task: this.task, form: this.form, errors: this.errors });
    }
  }

  async loadNext(): Promise<void> {
    try {
      const result = await this.api.fetchTask(this.workerId);
      if (result.kind === "done") {
        this.task = null;
        this.render({ screen: "done" });
        return;
      }
      this.task = result.task;
      this.form = emptyForm();
      this.errors = [];
      this.renderTask();
    } catch (err) {
      const message = err instanceof ApiError ? err.message : "network failure";
      this.render({ screen: "retry", message });
    }
  }

  audioPlayed(): void {
    this.form = markAudioPlayed(this.form);
    this.renderTask();
  }

  rate(dimension: RatingDimension, value: number): void {
    this.form = setRating(this.form, dimension, value);
    this.renderTask();
  }

  typeKey(text: string): void {
    this.form = setTypedKey(this.form, text);
    this.renderTask();
  }

  get submittable(): boolean {
    return this.task !== null && canSubmit(this.form);
  }

  async submit(): Promise<void> {
    if (!this.task || !canSubmit(this.form)) return;
    const body = buildJudgmentBody(this.workerId, this.task, this.form);
    this.form = { ...this.form, submitting: true };
    this.renderTask();
    try {
      const result = await this.api.postJudgment(body);
      if (result.kind === "rejected") {
        this.form = { ...this.form, submitting: false };
        this.errors = result.problems;
        this.renderTask();
        return;
      }
      // accepted, or a duplicate the server already holds: move on
      await this.loadNext();
    } catch (err) {
      this.form = { ...this.form, submitting: false };
      this.errors = [err instanceof Error ? err.message : "submit failed"];
      this.renderTask();
    }
  }
}
