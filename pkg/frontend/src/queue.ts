/**
 * Mutation serializer: at most one request in flight; later jobs run
 * in arrival order. A failing job never blocks the jobs behind it.
 */

export class MutationQueue {
  private tail: Promise<void> = Promise.resolve();

  /** Enqueue a job; resolves (or rejects) with that job's outcome. */
  push(job: () => Promise<void>): Promise<void> {
    const outcome = this.tail.then(job);
    this.tail = outcome.then(
      () => undefined,
      () => undefined,
    );
    return outcome;
  }

  /** Resolves once everything enqueued so far has finished. */
  settled(): Promise<void> {
    return this.tail;
  }
}
